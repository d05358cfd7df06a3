//! Axiom systems as lists of cataloged identities.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Algebra, LinearOperator, StructureBundle};
use crate::error::{Error, Result};
use crate::identity::Value;
use crate::identity::{check_with, CheckName, Evaluator, IdentityId, ProductRole, Verdict, Witness};
use crate::report::{CheckResult, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Novikov,
    LeftSymmetric,
    CommutativeAssociative,
    HomAssociativeCommutative,
    HomLie,
    HomNovikov,
    NovikovPoisson,
    HomNovikovPoisson,
    QuadraticNovikov,
    QuadraticHomNovikov,
    QuadraticHomLie,
}

impl StructureKind {
    pub const ALL: &'static [StructureKind] = &[
        StructureKind::Novikov,
        StructureKind::LeftSymmetric,
        StructureKind::CommutativeAssociative,
        StructureKind::HomAssociativeCommutative,
        StructureKind::HomLie,
        StructureKind::HomNovikov,
        StructureKind::NovikovPoisson,
        StructureKind::HomNovikovPoisson,
        StructureKind::QuadraticNovikov,
        StructureKind::QuadraticHomNovikov,
        StructureKind::QuadraticHomLie,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Novikov => "novikov",
            StructureKind::LeftSymmetric => "left-symmetric",
            StructureKind::CommutativeAssociative => "commutative-associative",
            StructureKind::HomAssociativeCommutative => "hom-associative-commutative",
            StructureKind::HomLie => "hom-lie",
            StructureKind::HomNovikov => "hom-novikov",
            StructureKind::NovikovPoisson => "novikov-poisson",
            StructureKind::HomNovikovPoisson => "hom-novikov-poisson",
            StructureKind::QuadraticNovikov => "quadratic-novikov",
            StructureKind::QuadraticHomNovikov => "quadratic-hom-novikov",
            StructureKind::QuadraticHomLie => "quadratic-hom-lie",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StructureKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "structure kind",
                name: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Whether Hom-kinds require the twist to be multiplicative. On by
    /// default; turning it off is meant for exploratory inputs.
    pub require_morphism: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { require_morphism: true }
    }
}

#[derive(Clone, Copy, Debug)]
enum On {
    Subject,
    DotFirst,
    Dot,
    Star,
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Identity(IdentityId, On),
    Nondegenerate,
}

fn plan(kind: StructureKind, opts: ValidateOptions) -> Vec<Step> {
    use IdentityId::*;
    use Step::Identity as I;
    let morphism = |on| opts.require_morphism.then_some(I(Morphism, on));
    let mut steps: Vec<Option<Step>> = Vec::new();
    match kind {
        StructureKind::Novikov => {
            steps.extend([Some(I(RightCommute, On::Subject)), Some(I(LeftSymmetry, On::Subject))]);
        }
        StructureKind::LeftSymmetric => steps.push(Some(I(LeftSymmetry, On::Subject))),
        StructureKind::CommutativeAssociative => {
            steps.extend([
                Some(I(Commutativity, On::DotFirst)),
                Some(I(Associativity, On::DotFirst)),
            ]);
        }
        StructureKind::HomAssociativeCommutative => {
            steps.extend([
                Some(I(Commutativity, On::DotFirst)),
                Some(I(HomAssociativity, On::DotFirst)),
            ]);
        }
        StructureKind::HomLie => {
            steps.extend([Some(I(SkewSymmetry, On::Subject)), Some(I(HomJacobi, On::Subject))]);
        }
        StructureKind::HomNovikov => {
            steps.extend([
                morphism(On::Subject),
                Some(I(HomRightCommute, On::Subject)),
                Some(I(HomLeftSymmetry, On::Subject)),
            ]);
        }
        StructureKind::NovikovPoisson => {
            steps.extend([
                Some(I(Commutativity, On::Dot)),
                Some(I(Associativity, On::Dot)),
                Some(I(RightCommute, On::Star)),
                Some(I(LeftSymmetry, On::Star)),
                Some(I(Np1, On::Subject)),
                Some(I(Np2, On::Subject)),
            ]);
        }
        StructureKind::HomNovikovPoisson => {
            steps.extend([
                Some(I(Commutativity, On::Dot)),
                Some(I(HomAssociativity, On::Dot)),
                morphism(On::Dot),
                morphism(On::Star),
                Some(I(HomRightCommute, On::Star)),
                Some(I(HomLeftSymmetry, On::Star)),
                Some(I(HomNp1, On::Subject)),
                Some(I(HomNp2, On::Subject)),
            ]);
        }
        StructureKind::QuadraticNovikov => {
            steps.extend(plan(StructureKind::Novikov, opts).into_iter().map(Some));
            steps.extend([
                Some(I(FormSymmetry, On::Subject)),
                Some(Step::Nondegenerate),
                Some(I(FormAssoc, On::Subject)),
            ]);
        }
        StructureKind::QuadraticHomNovikov => {
            steps.extend(plan(StructureKind::HomNovikov, opts).into_iter().map(Some));
            steps.extend([
                Some(I(FormSymmetry, On::Subject)),
                Some(Step::Nondegenerate),
                Some(I(FormHomInvariance, On::Subject)),
            ]);
        }
        StructureKind::QuadraticHomLie => {
            steps.extend(plan(StructureKind::HomLie, opts).into_iter().map(Some));
            steps.extend([
                Some(I(FormSymmetry, On::Subject)),
                Some(Step::Nondegenerate),
                Some(I(FormLieInvariance, On::Subject)),
                Some(I(FormAlphaCompat, On::Subject)),
            ]);
        }
    }
    steps.into_iter().flatten().collect()
}

fn resolve<E: Evaluator + ?Sized>(ev: &E, on: On) -> ProductRole {
    use crate::identity::Role;
    match on {
        On::Subject => ev.default_subject(),
        On::DotFirst => {
            if ev.has_role(Role::Dot) {
                ProductRole::Dot
            } else {
                ProductRole::Star
            }
        }
        On::Dot => ProductRole::Dot,
        On::Star => ProductRole::Star,
    }
}

/// Runs the axiom system `kind` against any evaluator.
pub fn validate_generic<E: Evaluator + ?Sized>(
    ev: &E,
    kind: StructureKind,
    opts: ValidateOptions,
) -> Result<Report<E::Index, E::Elem>> {
    let steps = plan(kind, opts);
    // Fail on missing roles before running anything.
    for step in &steps {
        if let Step::Identity(id, on) = *step {
            let subject = resolve(ev, on);
            for role in id.roles(subject) {
                if !ev.has_role(role) {
                    return Err(Error::MissingRole { identity: id, role });
                }
            }
        }
    }
    let mut report = Report::default();
    for step in steps {
        let result = match step {
            Step::Identity(id, on) => {
                let subject = resolve(ev, on);
                CheckResult {
                    name: CheckName::Identity(id),
                    on: id.reads_subject().then_some(subject),
                    verdict: check_with(ev, id, subject)?,
                }
            }
            Step::Nondegenerate => {
                let verdict = match ev.form_radical()? {
                    None => Verdict::pass(),
                    Some(v) => Verdict::fail(Witness {
                        check: CheckName::Nondegenerate,
                        tuple: Vec::new(),
                        lhs: Value::Element(v),
                        rhs: Value::Scalar(ev.field().zero()),
                    }),
                };
                CheckResult {
                    name: CheckName::Nondegenerate,
                    on: None,
                    verdict,
                }
            }
        };
        report.checks.push(result);
    }
    Ok(report)
}

pub fn validate(bundle: &StructureBundle, kind: StructureKind) -> Result<Report> {
    validate_generic(bundle, kind, ValidateOptions::default())
}

pub fn validate_with_options(bundle: &StructureBundle, kind: StructureKind, opts: ValidateOptions) -> Result<Report> {
    validate_generic(bundle, kind, opts)
}

/// Classification of a linear self-map relative to a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapProperties {
    pub endomorphism: bool,
    pub automorphism: bool,
    pub involution: bool,
    pub derivation: bool,
}

fn check_dims(a: &Algebra, op: &LinearOperator) -> Result<()> {
    if a.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: op.dim(),
        });
    }
    if a.field() != op.field() {
        return Err(Error::FieldMismatch {
            expected: a.field(),
            found: op.field(),
        });
    }
    Ok(())
}

/// `alpha(xy) = alpha(x) alpha(y)` on all basis pairs.
pub fn morphism_verdict(a: &Algebra, op: &LinearOperator) -> Result<Verdict> {
    check_dims(a, op)?;
    let b = StructureBundle::from_star(a.clone()).with_alpha(op.clone())?;
    check_with(&b, IdentityId::Morphism, ProductRole::Star)
}

/// Leibniz rule on all basis pairs.
pub fn derivation_verdict(a: &Algebra, op: &LinearOperator) -> Result<Verdict> {
    check_dims(a, op)?;
    let b = StructureBundle::from_star(a.clone()).with_del(op.clone())?;
    check_with(&b, IdentityId::Derivation, ProductRole::Star)
}

pub fn map_properties(a: &Algebra, op: &LinearOperator) -> Result<MapProperties> {
    check_dims(a, op)?;
    let endomorphism = morphism_verdict(a, op)?.holds();
    Ok(MapProperties {
        endomorphism,
        automorphism: endomorphism && op.matrix().is_invertible(),
        involution: op.matrix().mul(op.matrix()).is_identity(),
        derivation: derivation_verdict(a, op)?.holds(),
    })
}
