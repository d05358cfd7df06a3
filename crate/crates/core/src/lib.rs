//! Exact structure-constant algebras and the Hom-Novikov family of axiom
//! systems.
//!
//! An [`Algebra`] is a rank-3 tensor of exact [`Scalar`]s. A
//! [`StructureBundle`] groups up to two products with a twist `alpha`, a
//! linear map `del`, a bilinear form and a scalar. The identity engine in
//! [`identity`] checks any cataloged multilinear identity on basis tuples and
//! reports the lexicographically smallest failing tuple; [`validate`] composes
//! identities into axiom systems, [`constructions`] and [`quadratic`] build
//! new structures from old ones, and [`families`] evaluates the two
//! infinite-dimensional example families on finite windows.

pub mod algebra;
pub mod constructions;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod identity;
pub mod linalg;
pub mod quadratic;
pub mod report;
pub mod scalar;
pub mod validate;

pub use algebra::{Algebra, BilinearForm, LinearOperator, StructureBundle, MAX_EXACT_DIM};
pub use error::{Error, Result};
pub use identity::{
    associator, check_identity, check_identity_on, random_sanity, CheckName, Evaluator, IdentityId, MapRole,
    ProductRole, Role, SanityVerdict, Value, Verdict, Witness,
};
pub use linalg::{Matrix, Vector};
pub use report::{CheckResult, Report};
pub use scalar::{Field, Scalar};
pub use validate::{map_properties, validate, validate_with_options, MapProperties, StructureKind, ValidateOptions};
