use thiserror::Error;

use crate::identity::{IdentityId, Role};
use crate::report::Report;
use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("duplicate structure constant entry ({0}, {1}, {2})")]
    DuplicateEntry(usize, usize, usize),

    #[error("duplicate matrix entry ({0}, {1})")]
    DuplicateMatrixEntry(usize, usize),

    #[error("dimension {dim} exceeds the exact-mode cap of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("prime modulus {0} is too large (must be below 65536)")]
    ModulusTooLarge(u32),

    #[error("cannot parse field {0:?} (expected Q, GF(p) or GF:p)")]
    ParseField(String),

    #[error("cannot parse scalar {0:?} (expected \"p/q\" or \"p\")")]
    ParseScalar(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{identity} reads the {role} role, which the bundle does not provide")]
    MissingRole { identity: IdentityId, role: Role },

    #[error("the bundle has no {0} component")]
    RoleAbsent(Role),

    #[error("structure bundle needs at least one product")]
    EmptyBundle,

    #[error("{construction}: precondition failed: {condition}{}", render_report(.report))]
    Precondition {
        construction: &'static str,
        condition: String,
        report: Option<Box<Report>>,
    },

    #[error("search space {size} exceeds the enumeration guard {guard}")]
    GuardExceeded { size: u128, guard: u128 },

    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(Field),

    #[error("unknown {what} {name:?}")]
    Unknown { what: &'static str, name: String },

    #[error("{0}")]
    Family(String),
}

impl Error {
    pub(crate) fn precondition(construction: &'static str, condition: impl Into<String>) -> Self {
        Error::Precondition {
            construction,
            condition: condition.into(),
            report: None,
        }
    }

    pub(crate) fn failed_report(construction: &'static str, condition: impl Into<String>, report: Report) -> Self {
        Error::Precondition {
            construction,
            condition: condition.into(),
            report: Some(Box::new(report)),
        }
    }
}

fn render_report(report: &Option<Box<Report>>) -> String {
    match report {
        Some(r) => format!("\n{r}"),
        None => String::new(),
    }
}
