//! Bilinear forms on algebras: invariance, form twists, quadratic
//! constructions, centers and lower central series.

use std::fmt;

use crate::algebra::{Algebra, BilinearForm, LinearOperator, StructureBundle};
use crate::constructions::involutive_untwist;
use crate::error::{Error, Result};
use crate::identity::{check_identity, CheckName, IdentityId, ProductRole, Verdict};
use crate::linalg::{nullspace, rref_in_place, Vector};
use crate::report::{CheckResult, Report};
use crate::scalar::{Field, Scalar};
use crate::validate::{morphism_verdict, validate, StructureKind};

/// A linear subspace of `F^n`, stored by its reduced row echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// The span of `vectors` inside `F^ambient`.
    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.coeffs().to_vec()).collect();
        rref_in_place(&mut rows, ambient);
        let basis = rows
            .into_iter()
            .map(|r| Vector::from_coeffs(field, r).expect("coefficients share the field"))
            .collect();
        Subspace { field, ambient, basis }
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(field: Field, ambient: usize) -> Self {
        let basis: Vec<Vector> = (0..ambient).map(|i| Vector::basis(field, ambient, i)).collect();
        Subspace { field, ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut all = self.basis.clone();
        all.push(v.clone());
        Subspace::span(self.field, self.ambient, &all).dim() == self.dim()
    }

    pub fn is_within(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormProperties {
    pub symmetric: bool,
    pub nondegenerate: bool,
}

pub fn form_properties(b: &BilinearForm) -> FormProperties {
    FormProperties {
        symmetric: b.matrix().is_symmetric(),
        nondegenerate: b.matrix().is_invertible(),
    }
}

/// Checks one of the form identities on all basis tuples.
pub fn check_form_identity(bundle: &StructureBundle, id: IdentityId) -> Result<Verdict> {
    if !id.is_form_identity() {
        return Err(Error::Unknown {
            what: "form identity",
            name: id.name().to_string(),
        });
    }
    check_identity(bundle, id)
}

/// `B_{alpha^k}(x, y) = B(alpha^k(x), y)`, i.e. the matrix `(m^k)^T b`.
pub fn twist_form(b: &BilinearForm, alpha: &LinearOperator, k: u32) -> Result<BilinearForm> {
    if b.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: alpha.dim(),
        });
    }
    if b.field() != alpha.field() {
        return Err(Error::FieldMismatch {
            expected: b.field(),
            found: alpha.field(),
        });
    }
    let m = alpha.matrix().pow(k).transpose().mul(b.matrix());
    Ok(BilinearForm::new(m).with_label(format!("{}_alpha^{k}", b.label())))
}

fn single(id: IdentityId, on: Option<ProductRole>, verdict: Verdict) -> Report {
    Report {
        checks: vec![CheckResult {
            name: CheckName::Identity(id),
            on,
            verdict,
        }],
    }
}

fn require(construction: &'static str, condition: &str, report: Report) -> Result<()> {
    if report.passes() {
        Ok(())
    } else {
        Err(Error::failed_report(construction, condition, report))
    }
}

fn alpha_of<'a>(construction: &'static str, bundle: &'a StructureBundle) -> Result<&'a LinearOperator> {
    bundle
        .alpha()
        .ok_or_else(|| Error::precondition(construction, "bundle needs a twist"))
}

fn form_of<'a>(construction: &'static str, bundle: &'a StructureBundle) -> Result<&'a BilinearForm> {
    bundle
        .form()
        .ok_or_else(|| Error::precondition(construction, "bundle needs a form"))
}

/// Twist is an automorphism of the subject product and self-adjoint for the form.
fn require_compatible_automorphism(construction: &'static str, bundle: &StructureBundle) -> Result<()> {
    let alpha = alpha_of(construction, bundle)?;
    form_of(construction, bundle)?;
    let subject = bundle.subject();
    let on = if bundle.star().is_some() {
        ProductRole::Star
    } else {
        ProductRole::Dot
    };
    require(
        construction,
        "alpha must be an endomorphism",
        single(IdentityId::Morphism, Some(on), morphism_verdict(subject, alpha)?),
    )?;
    if !alpha.matrix().is_invertible() {
        return Err(Error::precondition(construction, "alpha is singular"));
    }
    require(
        construction,
        "alpha must satisfy B(alpha(x), y) = B(x, alpha(y))",
        single(
            IdentityId::FormAlphaCompat,
            None,
            check_identity(bundle, IdentityId::FormAlphaCompat)?,
        ),
    )
}

fn require_kind(construction: &'static str, bundle: &StructureBundle, kind: StructureKind) -> Result<()> {
    require(construction, &format!("input must be {kind}"), validate(bundle, kind)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomLieMode {
    /// Commutator bracket of a quadratic Hom-Novikov bundle.
    FromHomNovikov,
    /// `alpha o [., .]` from a quadratic Novikov bundle and an automorphism.
    FromNovikovWithAutomorphism,
}

impl HomLieMode {
    pub fn name(self) -> &'static str {
        match self {
            HomLieMode::FromHomNovikov => "from-hom-novikov",
            HomLieMode::FromNovikovWithAutomorphism => "from-novikov-with-automorphism",
        }
    }
}

impl std::str::FromStr for HomLieMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [HomLieMode::FromHomNovikov, HomLieMode::FromNovikovWithAutomorphism]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "hom-lie mode",
                name: s.to_string(),
            })
    }
}

/// Quadratic Hom-Lie structure `(bracket, alpha, B_alpha)` on the subject
/// product of `bundle`.
pub fn derive_quadratic_homlie(bundle: &StructureBundle, mode: HomLieMode) -> Result<StructureBundle> {
    const NAME: &str = "derive-quadratic-homlie";
    let kind = match mode {
        HomLieMode::FromHomNovikov => StructureKind::QuadraticHomNovikov,
        HomLieMode::FromNovikovWithAutomorphism => StructureKind::QuadraticNovikov,
    };
    alpha_of(NAME, bundle)?;
    require_kind(NAME, bundle, kind)?;
    require_compatible_automorphism(NAME, bundle)?;
    let alpha = alpha_of(NAME, bundle)?;
    let form = form_of(NAME, bundle)?;
    let commutator = bundle.subject().commutator();
    let bracket = match mode {
        HomLieMode::FromHomNovikov => commutator,
        HomLieMode::FromNovikovWithAutomorphism => commutator.twisted_by(alpha.matrix()),
    };
    StructureBundle::from_star(bracket.with_label("bracket"))
        .with_alpha(alpha.clone())?
        .with_form(twist_form(form, alpha, 1)?)
}

/// `(alpha o mu, B)` from a quadratic Hom-Novikov bundle whose twist is a
/// form-compatible involution. The result is quadratic Novikov.
pub fn quadratic_novikov_from_involutive(bundle: &StructureBundle) -> Result<StructureBundle> {
    const NAME: &str = "quadratic-novikov-from-involutive";
    let form = form_of(NAME, bundle)?.clone();
    alpha_of(NAME, bundle)?;
    require_kind(NAME, bundle, StructureKind::QuadraticHomNovikov)?;
    require(
        NAME,
        "alpha must satisfy B(alpha(x), y) = B(x, alpha(y))",
        single(
            IdentityId::FormAlphaCompat,
            None,
            check_identity(bundle, IdentityId::FormAlphaCompat)?,
        ),
    )?;
    let product = involutive_untwist(bundle).map_err(|e| match e {
        Error::Precondition { condition, report, .. } => Error::Precondition {
            construction: NAME,
            condition,
            report,
        },
        other => other,
    })?;
    StructureBundle::from_star(product).with_form(form)
}

/// `(alpha^n o mu, alpha^(n+1), B_{alpha^(n+1)})` from a quadratic
/// Hom-Novikov bundle with a form-compatible automorphism. The result is
/// quadratic Hom-Novikov.
pub fn quadratic_power_twist(bundle: &StructureBundle, n: u32) -> Result<StructureBundle> {
    const NAME: &str = "quadratic-power-twist";
    if n == 0 {
        return Err(Error::precondition(NAME, "the power must be positive"));
    }
    alpha_of(NAME, bundle)?;
    form_of(NAME, bundle)?;
    require_kind(NAME, bundle, StructureKind::QuadraticHomNovikov)?;
    require_compatible_automorphism(NAME, bundle)?;
    let alpha = alpha_of(NAME, bundle)?;
    let form = form_of(NAME, bundle)?;
    let product = bundle.subject().twisted_by(alpha.pow(n).matrix());
    StructureBundle::from_star(product)
        .with_alpha(alpha.pow(n + 1))?
        .with_form(twist_form(form, alpha, n + 1)?)
}

/// `{x : xy = yx = 0 for all y}`.
pub fn center(a: &Algebra) -> Subspace {
    let field = a.field();
    let n = a.dim();
    // x = sum x_u e_u; (x e_i)_k = sum_u x_u c[u][i][k], (e_i x)_k = sum_u x_u c[i][u][k].
    let mut rows = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|u| a.constant(u, i, k).clone()).collect());
            rows.push((0..n).map(|u| a.constant(i, u, k).clone()).collect());
        }
    }
    Subspace::span(field, n, &nullspace(field, &rows, n))
}

/// `span{[x, v] : x in basis, v in s}` for the bracket `l`.
pub fn bracket_with(l: &Algebra, s: &Subspace) -> Subspace {
    let field = l.field();
    let n = l.dim();
    let mut out = Vec::new();
    for i in 0..n {
        let e = Vector::basis(field, n, i);
        for v in s.basis() {
            out.push(l.mul_unchecked(&e, v));
        }
    }
    Subspace::span(field, n, &out)
}

/// `[G^1, G^2, ...]` with `G^1 = G` and `G^(i+1) = [G, G^i]`, computing at
/// most `max_steps` brackets and stopping early at zero or when the series
/// stabilizes.
pub fn lower_central_series(l: &Algebra, max_steps: usize) -> Vec<Subspace> {
    let mut series = vec![Subspace::whole(l.field(), l.dim())];
    for _ in 0..max_steps {
        let last = series.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = bracket_with(l, last);
        let stable = &next == last;
        series.push(next);
        if stable {
            break;
        }
    }
    series
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// `[G, G]` lies in the center of the underlying product.
    pub derived_in_center: bool,
    /// `G^3 = 0`.
    pub two_step: bool,
    pub lcs_dims: Vec<usize>,
    pub center: Subspace,
    pub derived: Subspace,
}

/// Commutator bracket of a quadratic Hom-Novikov bundle with a
/// form-compatible automorphism, checked for `[G, G]` inside the center and
/// `G^3 = 0`.
///
/// Inputs passing every hypothesis except `form-alpha-compat` are rejected
/// with a condition naming that identity.
pub fn nilpotency_report(bundle: &StructureBundle) -> Result<NilpotencyReport> {
    const NAME: &str = "nilpotency";
    alpha_of(NAME, bundle)?;
    form_of(NAME, bundle)?;
    require_kind(NAME, bundle, StructureKind::QuadraticHomNovikov)?;
    require_compatible_automorphism(NAME, bundle)?;
    Ok(nilpotency_of(bundle.subject()))
}

/// The nilpotency computation without any hypothesis checks.
pub fn nilpotency_of(a: &Algebra) -> NilpotencyReport {
    let bracket = a.commutator();
    let z = center(a);
    let series = lower_central_series(&bracket, a.dim() + 1);
    let whole = Subspace::whole(a.field(), a.dim());
    let derived = bracket_with(&bracket, &whole);
    let third = bracket_with(&bracket, &derived);
    NilpotencyReport {
        derived_in_center: derived.is_within(&z),
        two_step: third.is_zero(),
        lcs_dims: series.iter().map(Subspace::dim).collect(),
        center: z,
        derived,
    }
}
