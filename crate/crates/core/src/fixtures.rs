//! Small named algebras and maps used throughout the tests, the CLI demos
//! and the documentation.

use crate::algebra::{Algebra, BilinearForm, LinearOperator};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// `F[eps]/(eps^2)` with `e0 = 1`, `e1 = eps`.
pub fn dual_numbers(field: Field) -> Algebra {
    Algebra::from_i64_entries(field, 2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]).with_label("dual numbers")
}

/// `e0 e0 = e1`, every other product zero.
pub fn square_to_e1(field: Field) -> Algebra {
    Algebra::from_i64_entries(field, 2, &[(0, 0, 1, 1)]).with_label("e0e0=e1")
}

/// `e0 e0 = e0`, `e0 e1 = e1`: a left unit that is not a right unit. Fails
/// `right-commute`.
pub fn left_unit(field: Field) -> Algebra {
    Algebra::from_i64_entries(field, 2, &[(0, 0, 0, 1), (0, 1, 1, 1)]).with_label("left unit")
}

/// `1 -> 0`, `eps -> eps`: a derivation of the dual numbers.
pub fn eps_derivation(field: Field) -> LinearOperator {
    LinearOperator::new(Matrix::from_rows_i64(field, &[&[0, 0], &[0, 1]])).with_label("eps d/deps")
}

/// `eps -> -eps`, an involutive automorphism of the dual numbers.
pub fn eps_negation(field: Field) -> LinearOperator {
    LinearOperator::new(Matrix::from_rows_i64(field, &[&[1, 0], &[0, -1]])).with_label("eps->-eps")
}

/// `1 -> 1`, `eps -> 0`.
pub fn eps_projection(field: Field) -> LinearOperator {
    LinearOperator::new(Matrix::from_rows_i64(field, &[&[1, 0], &[0, 0]])).with_label("eps->0")
}

/// The hyperbolic pairing `[[0, 1], [1, 0]]`.
pub fn hyperbolic_form(field: Field) -> BilinearForm {
    BilinearForm::new(Matrix::from_rows_i64(field, &[&[0, 1], &[1, 0]])).with_label("hyperbolic")
}

/// Swap of two basis vectors.
pub fn swap(field: Field) -> LinearOperator {
    LinearOperator::new(Matrix::from_rows_i64(field, &[&[0, 1], &[1, 0]])).with_label("swap")
}

/// `F[t]/(t^n)` with basis `1, t, ..., t^(n-1)`.
pub fn truncated_polynomials(field: Field, n: usize) -> Algebra {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                entries.push((i, j, i + j, field.one()));
            }
        }
    }
    Algebra::new(field, n, entries)
        .expect("valid constants")
        .with_label(format!("F[t]/(t^{n})"))
}

/// Euler derivation `t d/dt`: `t^k -> k t^k`.
pub fn euler_derivation(field: Field, n: usize) -> LinearOperator {
    let d: Vec<Scalar> = (0..n).map(|k| Scalar::from_i64(field, k as i64)).collect();
    LinearOperator::diagonal(field, &d).with_label("t d/dt")
}

/// `t -> c t`, i.e. `t^k -> c^k t^k`.
pub fn scaling(field: Field, n: usize, c: &Scalar) -> LinearOperator {
    let d: Vec<Scalar> = (0..n).map(|k| c.pow(k as i64).expect("nonnegative exponent")).collect();
    LinearOperator::diagonal(field, &d).with_label(format!("t->{c}t"))
}

/// Three-dimensional Heisenberg bracket `[e0, e1] = e2 = -[e1, e0]`.
pub fn heisenberg(field: Field) -> Algebra {
    Algebra::from_i64_entries(field, 3, &[(0, 1, 2, 1), (1, 0, 2, -1)]).with_label("heisenberg")
}

/// The one-dimensional unital algebra `F`.
pub fn ground_field(field: Field) -> Algebra {
    Algebra::from_i64_entries(field, 1, &[(0, 0, 0, 1)]).with_label("F")
}
