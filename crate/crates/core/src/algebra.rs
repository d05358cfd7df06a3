//! Structure-constant algebras, linear operators, bilinear forms and the
//! bundles that group them into the tuples the validators and constructions
//! work on.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Field, Scalar};

/// Dimension cap for rational (exact) mode.
pub const MAX_EXACT_DIM: usize = 64;

/// A finite-dimensional algebra given by structure constants:
/// `e_i e_j = sum_k c[i][j][k] e_k`.
///
/// No axiom is assumed; associativity, the Novikov identities and so on are
/// verdicts of the validators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    dim: usize,
    field: Field,
    c: Vec<Scalar>,
    label: String,
}

impl Algebra {
    /// Builds an algebra from sparse `(i, j, k, value)` entries; unlisted
    /// entries are zero.
    pub fn new(
        field: Field,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
    ) -> Result<Self> {
        if field == Field::Rational && dim > MAX_EXACT_DIM {
            return Err(Error::DimensionTooLarge {
                dim,
                max: MAX_EXACT_DIM,
            });
        }
        let mut a = Algebra::zero(field, dim);
        let mut seen = HashSet::new();
        for (i, j, k, v) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if v.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: v.field(),
                });
            }
            if !seen.insert((i, j, k)) {
                return Err(Error::DuplicateEntry(i, j, k));
            }
            let idx = a.index(i, j, k);
            a.c[idx] = v;
        }
        Ok(a)
    }

    /// Integer-valued entries; panics on contract violations, intended for
    /// tests and fixed examples.
    pub fn from_i64_entries(field: Field, dim: usize, entries: &[(usize, usize, usize, i64)]) -> Self {
        Algebra::new(
            field,
            dim,
            entries
                .iter()
                .map(|&(i, j, k, v)| (i, j, k, Scalar::from_i64(field, v))),
        )
        .expect("valid structure constants")
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        Algebra {
            dim,
            field,
            c: vec![field.zero(); dim * dim * dim],
            label: String::new(),
        }
    }

    pub fn from_fn(field: Field, dim: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut c = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c.push(f(i, j, k));
                }
            }
        }
        Algebra {
            dim,
            field,
            c,
            label: String::new(),
        }
    }

    /// Builds the algebra whose product of basis elements `e_i e_j` is `f(i, j)`.
    pub fn from_basis_products(field: Field, dim: usize, mut f: impl FnMut(usize, usize) -> Vector) -> Self {
        let mut c = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                c.extend(v.coeffs().iter().cloned());
            }
        }
        Algebra {
            dim,
            field,
            c,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.index(i, j, k)]
    }

    /// The flat tensor `c[i][j][k]` in row-major order.
    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    /// Nonzero entries as `(i, j, k, value)`, in index order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        let n = self.dim;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(idx, v)| (idx / (n * n), (idx / n) % n, idx % n, v))
    }

    fn row(&self, i: usize, j: usize) -> &[Scalar] {
        let start = self.index(i, j, 0);
        &self.c[start..start + self.dim]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        Vector::from_coeffs(self.field, self.row(i, j).to_vec()).expect("same field")
    }

    pub fn check_vector(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if x.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: x.field(),
            });
        }
        Ok(())
    }

    /// `(xy)_k = sum_ij x_i y_j c[i][j][k]`.
    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero(self.field, self.dim);
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                out.add_scaled_in_place(&s, self.row(i, j));
            }
        }
        out
    }

    /// The associator `(xy)z - x(yz)`.
    pub fn associator(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        let xy = self.multiply(x, y)?;
        let yz = self.multiply(y, z)?;
        Ok(self.mul_unchecked(&xy, z).sub(&self.mul_unchecked(x, &yz)))
    }

    /// The product `alpha o mu`: every basis product is pushed through `m`.
    pub fn twisted_by(&self, m: &Matrix) -> Algebra {
        debug_assert_eq!(m.dim(), self.dim);
        Algebra::from_basis_products(self.field, self.dim, |i, j| m.apply(&self.basis_product(i, j)))
    }

    /// The commutator bracket `[x, y] = xy - yx`.
    pub fn commutator(&self) -> Algebra {
        Algebra::from_fn(self.field, self.dim, |i, j, k| {
            self.constant(i, j, k) - self.constant(j, i, k)
        })
    }

    /// Pointwise sum of two products on the same space.
    pub fn sum(&self, other: &Algebra) -> Algebra {
        Algebra::from_fn(self.field, self.dim, |i, j, k| {
            self.constant(i, j, k) + other.constant(i, j, k)
        })
    }

    pub fn scaled(&self, s: &Scalar) -> Algebra {
        Algebra::from_fn(self.field, self.dim, |i, j, k| self.constant(i, j, k) * s)
    }

    pub fn is_zero_product(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// Same structure constants, ignoring labels.
    pub fn same_constants(&self, other: &Algebra) -> bool {
        self.dim == other.dim && self.field == other.field && self.c == other.c
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {:?} over {} (dim {})", self.label, self.field, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.basis_product(i, j);
                if !v.is_zero() {
                    writeln!(f, "  e{i} e{j} = {v}")?;
                }
            }
        }
        Ok(())
    }
}

/// A linear self-map, column convention: `map(e_j) = sum_i m[i][j] e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearOperator {
    matrix: Matrix,
    label: String,
}

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Self {
        LinearOperator {
            matrix,
            label: String::new(),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        LinearOperator::new(Matrix::identity(field, n)).with_label("id")
    }

    pub fn zero(field: Field, n: usize) -> Self {
        LinearOperator::new(Matrix::zero(field, n)).with_label("0")
    }

    /// Diagonal operator `e_i -> d_i e_i`.
    pub fn diagonal(field: Field, d: &[Scalar]) -> Self {
        LinearOperator::new(Matrix::from_fn(field, d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                field.zero()
            }
        }))
    }

    /// Operator sending `e_j` to `images[j]`.
    pub fn from_images(field: Field, images: &[Vector]) -> Self {
        LinearOperator::new(Matrix::from_columns(field, images))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.matrix.apply(x)
    }

    pub fn compose(&self, inner: &LinearOperator) -> LinearOperator {
        LinearOperator::new(self.matrix.mul(&inner.matrix))
    }

    pub fn pow(&self, k: u32) -> LinearOperator {
        LinearOperator::new(self.matrix.pow(k))
    }

    pub fn inverse(&self) -> Option<LinearOperator> {
        self.matrix.inverse().map(LinearOperator::new)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn kronecker(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator::new(self.matrix.kronecker(&other.matrix))
    }
}

/// A bilinear form with Gram matrix `b[i][j] = B(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    matrix: Matrix,
    label: String,
}

impl BilinearForm {
    pub fn new(matrix: Matrix) -> Self {
        BilinearForm {
            matrix,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// `B(x, y) = x^T b y`.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Scalar {
        let by = self.matrix.apply(y);
        x.coeffs()
            .iter()
            .zip(by.coeffs())
            .filter(|(a, _)| !a.is_zero())
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// A nonzero `v` with `B(v, .) = 0`, if the form is degenerate.
    pub fn radical_vector(&self) -> Option<Vector> {
        let n = self.dim();
        let rows: Vec<Vec<Scalar>> = (0..n)
            .map(|j| (0..n).map(|i| self.matrix.get(i, j).clone()).collect())
            .collect();
        crate::linalg::nullspace(self.field(), &rows, n).into_iter().next()
    }
}

/// One space carrying up to two products, a twist, a second linear map, a
/// bilinear form and a scalar parameter.
///
/// The commutative-associative role is `dot`, the Novikov role is `star`.
/// Single-product identities read `star` when present and `dot` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureBundle {
    dim: usize,
    field: Field,
    pub(crate) dot: Option<Algebra>,
    pub(crate) star: Option<Algebra>,
    pub(crate) alpha: Option<LinearOperator>,
    pub(crate) del: Option<LinearOperator>,
    pub(crate) form: Option<BilinearForm>,
    pub(crate) lambda: Option<Scalar>,
}

impl StructureBundle {
    pub fn from_star(star: Algebra) -> Self {
        StructureBundle {
            dim: star.dim(),
            field: star.field(),
            dot: None,
            star: Some(star),
            alpha: None,
            del: None,
            form: None,
            lambda: None,
        }
    }

    pub fn from_dot(dot: Algebra) -> Self {
        StructureBundle {
            dim: dot.dim(),
            field: dot.field(),
            dot: Some(dot),
            star: None,
            alpha: None,
            del: None,
            form: None,
            lambda: None,
        }
    }

    /// Novikov-Poisson style pair.
    pub fn from_pair(dot: Algebra, star: Algebra) -> Result<Self> {
        StructureBundle::from_dot(dot).with_star(star)
    }

    fn check(&self, dim: usize, field: Field) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        if field != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: field,
            });
        }
        Ok(())
    }

    pub fn with_dot(mut self, dot: Algebra) -> Result<Self> {
        self.check(dot.dim(), dot.field())?;
        self.dot = Some(dot);
        Ok(self)
    }

    pub fn with_star(mut self, star: Algebra) -> Result<Self> {
        self.check(star.dim(), star.field())?;
        self.star = Some(star);
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: LinearOperator) -> Result<Self> {
        self.check(alpha.dim(), alpha.field())?;
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn with_del(mut self, del: LinearOperator) -> Result<Self> {
        self.check(del.dim(), del.field())?;
        self.del = Some(del);
        Ok(self)
    }

    pub fn with_form(mut self, form: BilinearForm) -> Result<Self> {
        self.check(form.dim(), form.field())?;
        self.form = Some(form);
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: Scalar) -> Result<Self> {
        if lambda.field() != self.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: lambda.field(),
            });
        }
        self.lambda = Some(lambda);
        Ok(self)
    }

    pub fn without_alpha(mut self) -> Self {
        self.alpha = None;
        self
    }

    pub fn without_form(mut self) -> Self {
        self.form = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dot(&self) -> Option<&Algebra> {
        self.dot.as_ref()
    }

    pub fn star(&self) -> Option<&Algebra> {
        self.star.as_ref()
    }

    pub fn alpha(&self) -> Option<&LinearOperator> {
        self.alpha.as_ref()
    }

    pub fn del(&self) -> Option<&LinearOperator> {
        self.del.as_ref()
    }

    pub fn form(&self) -> Option<&BilinearForm> {
        self.form.as_ref()
    }

    pub fn lambda(&self) -> Option<&Scalar> {
        self.lambda.as_ref()
    }

    /// The product single-product identities act on: `star`, else `dot`.
    pub fn subject(&self) -> &Algebra {
        self.star
            .as_ref()
            .or(self.dot.as_ref())
            .expect("bundle always holds a product")
    }

    /// The twist, or the identity map when none is set.
    pub fn alpha_or_identity(&self) -> LinearOperator {
        self.alpha
            .clone()
            .unwrap_or_else(|| LinearOperator::identity(self.field, self.dim))
    }
}
