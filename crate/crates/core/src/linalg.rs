//! Dense exact vectors and square matrices.
//!
//! Matrices act on column vectors: a matrix `m` represents the map
//! `e_j -> sum_i m[i][j] e_i`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A coordinate vector over a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Vector {
    pub fn zero(field: Field, n: usize) -> Self {
        Vector {
            field,
            coeffs: vec![field.zero(); n],
        }
    }

    pub fn basis(field: Field, n: usize, i: usize) -> Self {
        let mut v = Vector::zero(field, n);
        v.coeffs[i] = field.one();
        v
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<Scalar>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: c.field(),
                });
            }
        }
        Ok(Vector { field, coeffs })
    }

    /// Convenience constructor from integers.
    pub fn from_i64s(field: Field, values: &[i64]) -> Self {
        Vector {
            field,
            coeffs: values.iter().map(|&v| Scalar::from_i64(field, v)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            field: self.field,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub(crate) fn add_scaled_in_place(&mut self, s: &Scalar, other: &[Scalar]) {
        for (a, b) in self.coeffs.iter_mut().zip(other) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A square matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, n: usize) -> Self {
        Matrix {
            n,
            field,
            data: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Matrix::from_fn(field, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn from_fn(field: Field, n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, field, data }
    }

    /// Sparse constructor from `(row, col, value)` triples; unlisted entries are zero.
    pub fn from_entries(
        field: Field,
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut m = Matrix::zero(field, n);
        let mut seen = vec![false; n * n];
        for (i, j, v) in entries {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if v.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: v.field(),
                });
            }
            if std::mem::replace(&mut seen[i * n + j], true) {
                return Err(Error::DuplicateMatrixEntry(i, j));
            }
            m.data[i * n + j] = v;
        }
        Ok(m)
    }

    pub fn from_rows_i64(field: Field, rows: &[&[i64]]) -> Self {
        let n = rows.len();
        Matrix::from_fn(field, n, |i, j| Scalar::from_i64(field, rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, cols: &[Vector]) -> Self {
        let n = cols.len();
        Matrix::from_fn(field, n, |i, j| cols[j].get(i).clone())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            coeffs: (0..self.n).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zero(self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = &out.data[i * n + j] + &(a * b);
                        out.data[i * n + j] = cur;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        debug_assert_eq!(self.n, x.dim());
        let mut out = Vector::zero(self.field, self.n);
        for (j, xj) in x.coeffs.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for i in 0..self.n {
                let m = self.get(i, j);
                if !m.is_zero() {
                    out.coeffs[i] = &out.coeffs[i] + &(m * xj);
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Kronecker product; index `(i1, i2)` flattens to `i1 * n2 + i2`.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let n2 = other.n;
        Matrix::from_fn(self.field, self.n * n2, |r, c| {
            self.get(r / n2, c / n2) * other.get(r % n2, c % n2)
        })
    }

    /// Exact determinant.
    ///
    /// Over the rationals each row is scaled to integers and Bareiss
    /// elimination runs on the integer matrix; over GF(p) plain Gaussian
    /// elimination is already exact.
    pub fn determinant(&self) -> Scalar {
        match self.field {
            Field::Rational => self.rational_determinant(),
            Field::Prime(_) => self.gaussian_determinant(),
        }
    }

    fn rational_determinant(&self) -> Scalar {
        let n = self.n;
        let mut scale = BigInt::one();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<&BigRational> = (0..n)
                .map(|j| self.get(i, j).as_rational().expect("rational mode"))
                .collect();
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            scale *= &l;
            rows.push(row.iter().map(|r| r.numer() * (&l / r.denom())).collect());
        }
        let det = bareiss(rows);
        Scalar::Rational(BigRational::new(det, scale))
    }

    fn gaussian_determinant(&self) -> Scalar {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return self.field.zero();
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = &a[r * n + col] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = &a[r * n + j] - &(&f * &a[col * n + j]);
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut r: Vec<Scalar> = (0..n).map(|j| self.get(i, j).clone()).collect();
                r.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows, n);
        if pivots.len() < n {
            return None;
        }
        Some(Matrix::from_fn(self.field, n, |i, j| rows[i][n + j].clone()))
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Scalar>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        rref_in_place(&mut rows, self.n).len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn row(&self, i: usize) -> Vector {
        Vector {
            field: self.field,
            coeffs: (0..self.n).map(|j| self.get(i, j).clone()).collect(),
        }
    }
}

/// Fraction-free Bareiss determinant of an integer matrix.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduces `rows` to reduced row echelon form considering only the first
/// `ncols` columns for pivots; returns the pivot columns.
pub(crate) fn rref_in_place(rows: &mut Vec<Vec<Scalar>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vec<Scalar> = rows[r].iter().map(|v| v * &inv).collect();
        rows[r] = pivot_row;
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let updated: Vec<Scalar> = rows[i].iter().zip(&rows[r]).map(|(a, b)| a - &(&f * b)).collect();
            rows[i] = updated;
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for an `m x n` system given as rows, in reduced
/// echelon form.
pub(crate) fn nullspace(field: Field, rows: &[Vec<Scalar>], n: usize) -> Vec<Vector> {
    let mut work: Vec<Vec<Scalar>> = rows.to_vec();
    let pivots = rref_in_place(&mut work, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = Vector::zero(field, n);
        v.coeffs[f] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v.coeffs[p] = -&work[r][f];
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` for a consistent system (rows of `A` paired with `b`),
/// returning one solution with free variables set to zero.
pub(crate) fn solve(field: Field, rows: &[Vec<Scalar>], rhs: &[Scalar], n: usize) -> Option<Vector> {
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref_in_place(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = Vector::zero(field, n);
    for (r, &p) in pivots.iter().enumerate() {
        x.coeffs[p] = aug[r][n].clone();
    }
    Some(x)
}
