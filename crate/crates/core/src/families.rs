//! Two infinite-dimensional example families as finitely supported graded
//! vectors.
//!
//! * `Laurent { c }`: `F[t, t^-1] + theta F[t, t^-1]` with `theta^2 = 0`,
//!   `del(t^n + theta t^m) = t^n` and `alpha(t^n + theta t^m) = (t + c)^n`.
//! * `Indexed { q, s, beta }`: basis `x_a` for `a` in `Z`, `x_a . x_b =
//!   x_(a+b+q)`, `f(a) = s a` and `alpha(x_a) = beta^(a+q) x_a`.
//!
//! `alpha` of the Laurent family is only defined on nonnegative powers of
//! `t`; products and maps that go through it reject negative grades.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Algebra, LinearOperator, StructureBundle};
use crate::error::{Error, Result};
use crate::identity::{check_with, Evaluator, IdentityId, MapRole, ProductRole, Role, Verdict};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::{binomial, Field, Scalar};
use crate::validate::{validate_generic, StructureKind, ValidateOptions};

/// Basis label `t^grade` (parity 0) or `theta t^grade` (parity 1); the
/// indexed family uses parity 0 only, with `grade = a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedIndex {
    pub grade: i64,
    pub parity: u8,
}

impl GradedIndex {
    pub fn t(grade: i64) -> Self {
        GradedIndex { grade, parity: 0 }
    }

    pub fn theta(grade: i64) -> Self {
        GradedIndex { grade, parity: 1 }
    }
}

impl fmt::Debug for GradedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.grade, self.parity)
    }
}

/// Finite linear combination of graded basis vectors. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseElement {
    field: Field,
    terms: BTreeMap<GradedIndex, Scalar>,
}

impl SparseElement {
    pub fn zero(field: Field) -> Self {
        SparseElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: Field, index: GradedIndex) -> Self {
        SparseElement::term(index, field.one())
    }

    pub fn term(index: GradedIndex, coeff: Scalar) -> Self {
        let mut e = SparseElement::zero(coeff.field());
        e.add_term(index, coeff);
        e
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (GradedIndex, Scalar)>) -> Self {
        let mut e = SparseElement::zero(field);
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    fn add_term(&mut self, index: GradedIndex, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&index) {
            None => {
                self.terms.insert(index, coeff);
            }
            Some(old) => {
                let sum = &old + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(index, sum);
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GradedIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: GradedIndex) -> Scalar {
        self.terms.get(&index).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &SparseElement) -> SparseElement {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparseElement) -> SparseElement {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, -c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> SparseElement {
        SparseElement::from_terms(self.field, self.terms.iter().map(|(i, c)| (*i, c * s)))
    }
}

impl fmt::Display for SparseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let theta = if i.parity == 1 { "theta " } else { "" };
            write!(f, "{c} {theta}t^{}", i.grade)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Laurent { c: Scalar },
    Indexed { q: i64, s: Scalar, beta: Scalar },
}

impl FamilySpec {
    pub fn laurent(c: Scalar) -> Self {
        FamilySpec::Laurent { c }
    }

    /// Fails when `s` or `beta` vanishes or the two live in different fields.
    pub fn indexed(q: i64, s: Scalar, beta: Scalar) -> Result<Self> {
        if s.field() != beta.field() {
            return Err(Error::FieldMismatch {
                expected: s.field(),
                found: beta.field(),
            });
        }
        if s.is_zero() {
            return Err(Error::Family("f must be nontrivial (s != 0)".into()));
        }
        if beta.is_zero() {
            return Err(Error::Family("beta must be nonzero".into()));
        }
        Ok(FamilySpec::Indexed { q, s, beta })
    }

    pub fn field(&self) -> Field {
        match self {
            FamilySpec::Laurent { c } => c.field(),
            FamilySpec::Indexed { s, .. } => s.field(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Laurent { .. } => "laurent",
            FamilySpec::Indexed { .. } => "indexed",
        }
    }

    fn parities(&self) -> &'static [u8] {
        match self {
            FamilySpec::Laurent { .. } => &[0, 1],
            FamilySpec::Indexed { .. } => &[0],
        }
    }

    /// `f(a) = s a`.
    fn f(&self, a: i64) -> Scalar {
        match self {
            FamilySpec::Indexed { s, .. } => s * &Scalar::from_i64(s.field(), a),
            FamilySpec::Laurent { .. } => unreachable!("f belongs to the indexed family"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyProduct {
    /// Laurent: the usual multiplication.
    Dot,
    /// Laurent `alpha(xy)`; indexed `alpha(x . y)`.
    Bullet,
    /// Laurent `x del(y)`.
    Star1,
    /// Laurent `alpha(x del(y))`; indexed `alpha(x * y)`.
    Star2,
    /// Indexed `x_a * x_b = f(b+q) x_(a+b+q)`.
    Star,
    /// Indexed `x_a . x_b = x_(a+b+q)`.
    Dot56,
}

impl FamilyProduct {
    pub const ALL: &'static [FamilyProduct] = &[
        FamilyProduct::Dot,
        FamilyProduct::Bullet,
        FamilyProduct::Star1,
        FamilyProduct::Star2,
        FamilyProduct::Star,
        FamilyProduct::Dot56,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyProduct::Dot => "dot",
            FamilyProduct::Bullet => "bullet",
            FamilyProduct::Star1 => "star1",
            FamilyProduct::Star2 => "star2",
            FamilyProduct::Star => "star",
            FamilyProduct::Dot56 => "dot56",
        }
    }

    fn supported_by(self, spec: &FamilySpec) -> bool {
        use FamilyProduct::*;
        match spec {
            FamilySpec::Laurent { .. } => matches!(self, Dot | Bullet | Star1 | Star2),
            FamilySpec::Indexed { .. } => matches!(self, Dot56 | Star | Bullet | Star2),
        }
    }
}

impl FromStr for FamilyProduct {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyProduct::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "family product",
                name: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyMap {
    /// Laurent `t^n + theta t^m -> t^n`; indexed `x_a -> f(a+q) x_a`.
    Del,
    /// Indexed `x_(-q) * x - x * x_(-q)`.
    Del2,
    Alpha,
}

impl FamilyMap {
    pub const ALL: &'static [FamilyMap] = &[FamilyMap::Del, FamilyMap::Del2, FamilyMap::Alpha];

    pub fn name(self) -> &'static str {
        match self {
            FamilyMap::Del => "del",
            FamilyMap::Del2 => "del2",
            FamilyMap::Alpha => "alpha",
        }
    }

    fn supported_by(self, spec: &FamilySpec) -> bool {
        !matches!((self, spec), (FamilyMap::Del2, FamilySpec::Laurent { .. }))
    }
}

impl FromStr for FamilyMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyMap::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Unknown {
                what: "family map",
                name: s.to_string(),
            })
    }
}

fn check_field(spec: &FamilySpec, x: &SparseElement) -> Result<()> {
    if x.field() != spec.field() {
        return Err(Error::FieldMismatch {
            expected: spec.field(),
            found: x.field(),
        });
    }
    Ok(())
}

fn require_nonnegative(x: &SparseElement, what: &str) -> Result<()> {
    match x.terms().find(|(i, _)| i.parity == 0 && i.grade < 0) {
        Some((i, _)) => Err(Error::Family(format!(
            "{what} is only defined on nonnegative powers of t, got t^{}",
            i.grade
        ))),
        None => Ok(()),
    }
}

/// Bilinear extension of a rule on basis pairs.
fn bilinear(
    field: Field,
    x: &SparseElement,
    y: &SparseElement,
    mut rule: impl FnMut(GradedIndex, GradedIndex) -> Result<SparseElement>,
) -> Result<SparseElement> {
    let mut out = SparseElement::zero(field);
    for (i, a) in x.terms() {
        for (j, b) in y.terms() {
            let ab = a * b;
            for (k, c) in rule(*i, *j)?.terms() {
                out.add_term(*k, &ab * c);
            }
        }
    }
    Ok(out)
}

fn linear(
    field: Field,
    x: &SparseElement,
    mut rule: impl FnMut(GradedIndex) -> Result<SparseElement>,
) -> Result<SparseElement> {
    let mut out = SparseElement::zero(field);
    for (i, a) in x.terms() {
        for (k, c) in rule(*i)?.terms() {
            out.add_term(*k, a * c);
        }
    }
    Ok(out)
}

/// Laurent multiplication with `theta^2 = 0`.
fn laurent_dot(field: Field, i: GradedIndex, j: GradedIndex) -> SparseElement {
    if i.parity + j.parity > 1 {
        return SparseElement::zero(field);
    }
    SparseElement::basis(
        field,
        GradedIndex {
            grade: i.grade + j.grade,
            parity: i.parity + j.parity,
        },
    )
}

/// `(t + c)^n`.
fn shifted_power(c: &Scalar, n: i64) -> SparseElement {
    let field = c.field();
    let n = n as u64;
    SparseElement::from_terms(
        field,
        (0..=n).map(|k| {
            let coeff = &binomial(field, n, k) * &c.pow((n - k) as i64).expect("nonnegative exponent");
            (GradedIndex::t(k as i64), coeff)
        }),
    )
}

/// Applies a named product of the family.
pub fn family_product(
    spec: &FamilySpec,
    name: FamilyProduct,
    x: &SparseElement,
    y: &SparseElement,
) -> Result<SparseElement> {
    check_field(spec, x)?;
    check_field(spec, y)?;
    if !name.supported_by(spec) {
        return Err(Error::Family(format!(
            "the {} family has no {} product",
            spec.name(),
            name.name()
        )));
    }
    let field = spec.field();
    match spec {
        FamilySpec::Laurent { .. } => match name {
            FamilyProduct::Dot => bilinear(field, x, y, |i, j| Ok(laurent_dot(field, i, j))),
            FamilyProduct::Star1 => {
                let dy = family_map(spec, FamilyMap::Del, y)?;
                family_product(spec, FamilyProduct::Dot, x, &dy)
            }
            FamilyProduct::Bullet => {
                require_nonnegative(x, "bullet")?;
                require_nonnegative(y, "bullet")?;
                let xy = family_product(spec, FamilyProduct::Dot, x, y)?;
                family_map(spec, FamilyMap::Alpha, &xy)
            }
            FamilyProduct::Star2 => {
                require_nonnegative(x, "star2")?;
                require_nonnegative(y, "star2")?;
                let s = family_product(spec, FamilyProduct::Star1, x, y)?;
                family_map(spec, FamilyMap::Alpha, &s)
            }
            _ => unreachable!("checked by supported_by"),
        },
        FamilySpec::Indexed { q, .. } => match name {
            FamilyProduct::Dot56 => bilinear(field, x, y, |i, j| {
                Ok(SparseElement::basis(field, GradedIndex::t(i.grade + j.grade + q)))
            }),
            FamilyProduct::Star => bilinear(field, x, y, |i, j| {
                Ok(SparseElement::term(
                    GradedIndex::t(i.grade + j.grade + q),
                    spec.f(j.grade + q),
                ))
            }),
            FamilyProduct::Bullet => {
                let xy = family_product(spec, FamilyProduct::Dot56, x, y)?;
                family_map(spec, FamilyMap::Alpha, &xy)
            }
            FamilyProduct::Star2 => {
                let xy = family_product(spec, FamilyProduct::Star, x, y)?;
                family_map(spec, FamilyMap::Alpha, &xy)
            }
            _ => unreachable!("checked by supported_by"),
        },
    }
}

/// Applies a named linear map of the family.
pub fn family_map(spec: &FamilySpec, name: FamilyMap, x: &SparseElement) -> Result<SparseElement> {
    check_field(spec, x)?;
    if !name.supported_by(spec) {
        return Err(Error::Family(format!(
            "the {} family has no {} map",
            spec.name(),
            name.name()
        )));
    }
    let field = spec.field();
    match spec {
        FamilySpec::Laurent { c } => match name {
            FamilyMap::Del => linear(field, x, |i| {
                Ok(if i.parity == 0 {
                    SparseElement::basis(field, i)
                } else {
                    SparseElement::zero(field)
                })
            }),
            FamilyMap::Alpha => {
                require_nonnegative(x, "alpha")?;
                linear(field, x, |i| {
                    Ok(if i.parity == 0 {
                        shifted_power(c, i.grade)
                    } else {
                        SparseElement::zero(field)
                    })
                })
            }
            FamilyMap::Del2 => unreachable!("checked by supported_by"),
        },
        FamilySpec::Indexed { q, beta, .. } => match name {
            FamilyMap::Del => linear(field, x, |i| Ok(SparseElement::term(i, spec.f(i.grade + q)))),
            FamilyMap::Del2 => {
                let unit = SparseElement::basis(field, GradedIndex::t(-q));
                let l = family_product(spec, FamilyProduct::Star, &unit, x)?;
                let r = family_product(spec, FamilyProduct::Star, x, &unit)?;
                Ok(l.sub(&r))
            }
            FamilyMap::Alpha => linear(field, x, |i| Ok(SparseElement::term(i, beta.pow(i.grade + q)?))),
        },
    }
}

/// Closed grade interval `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Family(format!("empty window {lo}..{hi}")));
        }
        Ok(Window { lo, hi })
    }

    pub fn contains(&self, grade: i64) -> bool {
        (self.lo..=self.hi).contains(&grade)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `lo..hi` (both ends included).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Family(format!("cannot parse window {s:?} (expected lo..hi)"));
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        Window::new(lo, hi)
    }
}

/// Which family products and maps play which roles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FamilyRoles {
    pub dot: Option<FamilyProduct>,
    pub star: Option<FamilyProduct>,
    pub alpha: Option<FamilyMap>,
    pub del: Option<FamilyMap>,
}

/// A family with role assignments, evaluated on the basis of a window.
#[derive(Clone, Debug)]
pub struct FamilyEvaluator {
    spec: FamilySpec,
    roles: FamilyRoles,
    window: Window,
}

impl FamilyEvaluator {
    pub fn new(spec: FamilySpec, roles: FamilyRoles, window: Window) -> Result<Self> {
        for p in [roles.dot, roles.star].into_iter().flatten() {
            if !p.supported_by(&spec) {
                return Err(Error::Family(format!(
                    "the {} family has no {} product",
                    spec.name(),
                    p.name()
                )));
            }
        }
        for m in [roles.alpha, roles.del].into_iter().flatten() {
            if !m.supported_by(&spec) {
                return Err(Error::Family(format!(
                    "the {} family has no {} map",
                    spec.name(),
                    m.name()
                )));
            }
        }
        if roles.dot.is_none() && roles.star.is_none() {
            return Err(Error::EmptyBundle);
        }
        Ok(FamilyEvaluator { spec, roles, window })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn roles(&self) -> FamilyRoles {
        self.roles
    }

    pub fn window(&self) -> Window {
        self.window
    }
}

impl Evaluator for FamilyEvaluator {
    type Index = GradedIndex;
    type Elem = SparseElement;

    fn field(&self) -> Field {
        self.spec.field()
    }

    fn basis(&self) -> Vec<GradedIndex> {
        let mut out = Vec::new();
        for grade in self.window.lo..=self.window.hi {
            for &parity in self.spec.parities() {
                out.push(GradedIndex { grade, parity });
            }
        }
        out
    }

    fn basis_element(&self, index: &GradedIndex) -> SparseElement {
        SparseElement::basis(self.field(), *index)
    }

    fn has_role(&self, role: Role) -> bool {
        match role {
            Role::Dot => self.roles.dot.is_some(),
            Role::Star => self.roles.star.is_some(),
            Role::Alpha => self.roles.alpha.is_some(),
            Role::Del => self.roles.del.is_some(),
            Role::Form => false,
        }
    }

    fn zero(&self) -> SparseElement {
        SparseElement::zero(self.field())
    }

    fn add(&self, x: &SparseElement, y: &SparseElement) -> SparseElement {
        x.add(y)
    }

    fn sub(&self, x: &SparseElement, y: &SparseElement) -> SparseElement {
        x.sub(y)
    }

    fn scale(&self, s: &Scalar, x: &SparseElement) -> SparseElement {
        x.scale(s)
    }

    fn is_zero(&self, x: &SparseElement) -> bool {
        x.is_zero()
    }

    fn product(&self, role: ProductRole, x: &SparseElement, y: &SparseElement) -> Result<SparseElement> {
        let p = match role {
            ProductRole::Dot => self.roles.dot,
            ProductRole::Star => self.roles.star,
        };
        let p = p.ok_or(Error::RoleAbsent(role.role()))?;
        family_product(&self.spec, p, x, y)
    }

    fn map(&self, role: MapRole, x: &SparseElement) -> Result<SparseElement> {
        let m = match role {
            MapRole::Alpha => self.roles.alpha,
            MapRole::Del => self.roles.del,
        };
        let m = m.ok_or(Error::RoleAbsent(role.role()))?;
        family_map(&self.spec, m, x)
    }

    fn form(&self, _x: &SparseElement, _y: &SparseElement) -> Result<Scalar> {
        Err(Error::RoleAbsent(Role::Form))
    }

    fn form_radical(&self) -> Result<Option<SparseElement>> {
        Err(Error::RoleAbsent(Role::Form))
    }
}

pub type FamilyVerdict = Verdict<GradedIndex, SparseElement>;
pub type FamilyReport = Report<GradedIndex, SparseElement>;

/// Checks `id` on every basis tuple of the window. Outputs are computed in the
/// full family, never truncated.
pub fn window_verify(spec: &FamilySpec, id: IdentityId, roles: FamilyRoles, window: Window) -> Result<FamilyVerdict> {
    let ev = FamilyEvaluator::new(spec.clone(), roles, window)?;
    check_with(&ev, id, ev.default_subject())
}

/// Runs an axiom system on the window basis.
pub fn window_validate(
    spec: &FamilySpec,
    kind: StructureKind,
    roles: FamilyRoles,
    window: Window,
) -> Result<FamilyReport> {
    let ev = FamilyEvaluator::new(spec.clone(), roles, window)?;
    validate_generic(&ev, kind, ValidateOptions::default())
}

/// Whether products and maps never lower grades below `lo` and keep the
/// span of grades above `hi` stable.
fn quotient_is_sound(spec: &FamilySpec, roles: &FamilyRoles, window: Window) -> Result<()> {
    let lowers = |what: &str| {
        Err(Error::Family(format!(
            "{what} of the {} family does not preserve the grade filtration, so truncation is not a quotient",
            spec.name()
        )))
    };
    let shift = match spec {
        FamilySpec::Laurent { c } => {
            let lowering = !c.is_zero();
            if lowering {
                for p in [roles.dot, roles.star].into_iter().flatten() {
                    if matches!(p, FamilyProduct::Bullet | FamilyProduct::Star2) {
                        return lowers(p.name());
                    }
                }
                if roles.alpha.is_some() {
                    return lowers("alpha");
                }
            }
            0
        }
        FamilySpec::Indexed { q, .. } => *q,
    };
    // Products land in grade a + b + shift; with a >= lo, b > hi this stays
    // above hi exactly when lo + shift >= 0, and it never drops below lo when
    // lo + shift >= 0 as well.
    if window.lo + shift < 0 {
        return Err(Error::Family(format!(
            "window {window} is not closed: products can reach grade {}",
            2 * window.lo + shift
        )));
    }
    Ok(())
}

/// Finite bundle whose structure constants agree with the family on the
/// window, with basis in ascending `(grade, parity)` order.
///
/// Without `quotient` every product and map of window basis elements must
/// stay in the window. With `quotient`, terms above the window are dropped,
/// which models the quotient by the span of all higher grades; this is only
/// allowed when that span is an ideal stable under the chosen maps.
pub fn embed_window(spec: &FamilySpec, roles: FamilyRoles, window: Window, quotient: bool) -> Result<StructureBundle> {
    let ev = FamilyEvaluator::new(spec.clone(), roles, window)?;
    if quotient {
        quotient_is_sound(spec, &roles, window)?;
    }
    let basis = ev.basis();
    let n = basis.len();
    let field = spec.field();
    let position = |i: &GradedIndex| basis.binary_search(i).ok();
    let coords = |e: &SparseElement, what: &str| -> Result<Vec<Scalar>> {
        let mut v = vec![field.zero(); n];
        for (i, c) in e.terms() {
            match position(i) {
                Some(p) => v[p] = c.clone(),
                None if quotient && i.grade > window.hi => {}
                None => {
                    return Err(Error::Family(format!(
                        "window {window} is not closed under {what}: reaches {i:?}"
                    )))
                }
            }
        }
        Ok(v)
    };
    let product = |p: FamilyProduct| -> Result<Algebra> {
        let mut entries = Vec::new();
        for (a, i) in basis.iter().enumerate() {
            for (b, j) in basis.iter().enumerate() {
                let xy = family_product(spec, p, &ev.basis_element(i), &ev.basis_element(j))?;
                for (k, c) in coords(&xy, p.name())?.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((a, b, k, c));
                    }
                }
            }
        }
        Ok(Algebra::new(field, n, entries)?.with_label(format!("{} {} on {window}", spec.name(), p.name())))
    };
    let map = |m: FamilyMap| -> Result<LinearOperator> {
        let mut matrix = Matrix::zero(field, n);
        for (j, i) in basis.iter().enumerate() {
            let image = family_map(spec, m, &ev.basis_element(i))?;
            for (r, c) in coords(&image, m.name())?.into_iter().enumerate() {
                matrix.set(r, j, c);
            }
        }
        Ok(LinearOperator::new(matrix).with_label(m.name()))
    };
    let mut bundle = match (roles.dot, roles.star) {
        (Some(d), Some(s)) => StructureBundle::from_pair(product(d)?, product(s)?)?,
        (Some(d), None) => StructureBundle::from_dot(product(d)?),
        (None, Some(s)) => StructureBundle::from_star(product(s)?),
        (None, None) => return Err(Error::EmptyBundle),
    };
    if let Some(m) = roles.alpha {
        bundle = bundle.with_alpha(map(m)?)?;
    }
    if let Some(m) = roles.del {
        bundle = bundle.with_del(map(m)?)?;
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::Value;
    use crate::validate::validate;

    const Q: Field = Field::Rational;

    fn q(s: &str) -> Scalar {
        Scalar::parse(Q, s).unwrap()
    }

    fn t(n: i64) -> SparseElement {
        SparseElement::basis(Q, GradedIndex::t(n))
    }

    fn theta(n: i64) -> SparseElement {
        SparseElement::basis(Q, GradedIndex::theta(n))
    }

    fn laurent() -> FamilySpec {
        FamilySpec::laurent(q("1/2"))
    }

    fn indexed() -> FamilySpec {
        FamilySpec::indexed(1, q("1"), q("2")).unwrap()
    }

    fn x(a: i64) -> SparseElement {
        t(a)
    }

    #[test]
    fn laurent_star1_examples() {
        let s = laurent();
        let p = |a: &SparseElement, b: &SparseElement| family_product(&s, FamilyProduct::Star1, a, b).unwrap();
        assert!(p(&t(2), &theta(3)).is_zero());
        assert_eq!(p(&theta(3), &t(2)), theta(5));
        // (t^n1 + theta t^m1) star1 (t^n2 + theta t^m2) = t^(n1+n2) + theta t^(m1+n2)
        let lhs = p(&t(-2).add(&theta(4)), &t(3).add(&theta(-1)));
        assert_eq!(lhs, t(1).add(&theta(7)));
    }

    #[test]
    fn laurent_star2_examples() {
        let s = laurent();
        let r = family_product(&s, FamilyProduct::Star2, &t(1), &t(1)).unwrap();
        let expected = SparseElement::from_terms(
            Q,
            [
                (GradedIndex::t(2), q("1")),
                (GradedIndex::t(1), q("1")),
                (GradedIndex::t(0), q("1/4")),
            ],
        );
        assert_eq!(r, expected);
        // (t^n1 + theta t^m1) star2 (t^n2 + theta t^m2) = (t + c)^(n1+n2)
        let r = family_product(&s, FamilyProduct::Star2, &t(2).add(&theta(5)), &t(1).add(&theta(3))).unwrap();
        assert_eq!(r, shifted_power(&q("1/2"), 3));
        assert_eq!(
            family_product(&s, FamilyProduct::Bullet, &t(2), &t(1)).unwrap(),
            shifted_power(&q("1/2"), 3)
        );
        assert!(family_product(&s, FamilyProduct::Star2, &t(-1), &t(1)).is_err());
        assert!(family_product(&s, FamilyProduct::Star, &t(1), &t(1)).is_err());
    }

    #[test]
    fn laurent_maps() {
        let s = laurent();
        assert_eq!(family_map(&s, FamilyMap::Del, &t(3).add(&theta(5))).unwrap(), t(3));
        assert!(family_map(&s, FamilyMap::Alpha, &theta(2)).unwrap().is_zero());
        assert_eq!(
            family_map(&s, FamilyMap::Alpha, &t(2)).unwrap(),
            t(2).add(&t(1)).add(&t(0).scale(&q("1/4")))
        );
        assert!(family_map(&s, FamilyMap::Alpha, &t(-2)).is_err());
        assert!(family_map(&s, FamilyMap::Del2, &t(1)).is_err());
    }

    #[test]
    fn indexed_examples() {
        let s = indexed();
        assert_eq!(
            family_product(&s, FamilyProduct::Star, &x(2), &x(3)).unwrap(),
            x(6).scale(&q("4"))
        );
        assert_eq!(family_product(&s, FamilyProduct::Dot56, &x(2), &x(3)).unwrap(), x(6));
        assert_eq!(family_map(&s, FamilyMap::Del2, &x(3)).unwrap(), x(3).scale(&q("4")));
        assert_eq!(family_map(&s, FamilyMap::Del, &x(3)).unwrap(), x(3).scale(&q("4")));
        assert_eq!(
            family_map(&s, FamilyMap::Alpha, &x(-3)).unwrap(),
            x(-3).scale(&q("1/4"))
        );
        // beta^(a+b+2q) f(b+q) x_(a+b+q)
        assert_eq!(
            family_product(&s, FamilyProduct::Star2, &x(1), &x(2)).unwrap(),
            x(4).scale(&q("96"))
        );
        assert_eq!(
            family_product(&s, FamilyProduct::Bullet, &x(1), &x(2)).unwrap(),
            x(4).scale(&q("32"))
        );
        assert!(FamilySpec::indexed(1, q("0"), q("2")).is_err());
        assert!(FamilySpec::indexed(1, q("1"), q("0")).is_err());
    }

    #[test]
    fn star1_is_novikov_on_full_range() {
        let s = laurent();
        let roles = FamilyRoles {
            star: Some(FamilyProduct::Star1),
            ..Default::default()
        };
        let r = window_validate(&s, StructureKind::Novikov, roles, Window::new(-3, 3).unwrap()).unwrap();
        assert!(r.passes(), "{r}");
    }

    #[test]
    fn star2_is_hom_novikov() {
        let s = laurent();
        let roles = FamilyRoles {
            star: Some(FamilyProduct::Star2),
            alpha: Some(FamilyMap::Alpha),
            ..Default::default()
        };
        let r = window_validate(&s, StructureKind::HomNovikov, roles, Window::new(0, 3).unwrap()).unwrap();
        assert!(r.passes(), "{r}");
        let neg = window_validate(&s, StructureKind::HomNovikov, roles, Window::new(-1, 3).unwrap());
        assert!(matches!(neg, Err(Error::Family(_))));
    }

    #[test]
    fn laurent_del_satisfies_gd2_but_not_leibniz() {
        let s = laurent();
        let roles = FamilyRoles {
            dot: Some(FamilyProduct::Dot),
            del: Some(FamilyMap::Del),
            ..Default::default()
        };
        let w = Window::new(-3, 3).unwrap();
        assert!(window_verify(&s, IdentityId::Gd2, roles, w).unwrap().holds());
        let v = window_verify(&s, IdentityId::Derivation, roles, Window::new(1, 3).unwrap()).unwrap();
        let wit = v.witness().unwrap();
        assert_eq!(wit.tuple, vec![GradedIndex::t(1), GradedIndex::t(1)]);
        assert_eq!(wit.lhs, Value::Element(t(2)));
        assert_eq!(wit.rhs, Value::Element(t(2).scale(&q("2"))));
    }

    #[test]
    fn indexed_hom_np_suite() {
        let s = indexed();
        let roles = FamilyRoles {
            dot: Some(FamilyProduct::Bullet),
            star: Some(FamilyProduct::Star2),
            alpha: Some(FamilyMap::Alpha),
            del: None,
        };
        let r = window_validate(&s, StructureKind::HomNovikovPoisson, roles, Window::new(-2, 2).unwrap()).unwrap();
        assert!(r.passes(), "{r}");
        let plain = FamilyRoles {
            dot: Some(FamilyProduct::Dot56),
            star: Some(FamilyProduct::Star),
            ..Default::default()
        };
        let r = window_validate(&s, StructureKind::NovikovPoisson, plain, Window::new(-2, 2).unwrap()).unwrap();
        assert!(r.passes(), "{r}");
    }

    #[test]
    fn embed_examples() {
        let s0 = FamilySpec::indexed(0, q("1"), q("2")).unwrap();
        let roles = FamilyRoles {
            dot: Some(FamilyProduct::Dot56),
            ..Default::default()
        };
        let b = embed_window(&s0, roles, Window::new(0, 3).unwrap(), true).unwrap();
        assert_eq!(b.dim(), 4);
        assert!(b
            .dot()
            .unwrap()
            .same_constants(&crate::fixtures::truncated_polynomials(Q, 4)));

        let star1 = FamilyRoles {
            star: Some(FamilyProduct::Star1),
            ..Default::default()
        };
        let err = embed_window(&laurent(), star1, Window::new(0, 2).unwrap(), false).unwrap_err();
        assert!(err.to_string().contains("not closed"), "{err}");

        let dot = FamilyRoles {
            dot: Some(FamilyProduct::Dot),
            ..Default::default()
        };
        let b = embed_window(&laurent(), dot, Window::new(0, 3).unwrap(), true).unwrap();
        assert_eq!(b.dim(), 8);
        assert!(validate(&b, StructureKind::CommutativeAssociative).unwrap().passes());

        let bullet = FamilyRoles {
            dot: Some(FamilyProduct::Bullet),
            ..Default::default()
        };
        assert!(embed_window(&laurent(), bullet, Window::new(0, 3).unwrap(), true).is_err());
        assert!(embed_window(&laurent(), dot, Window::new(-1, 3).unwrap(), true).is_err());
    }

    #[test]
    fn embedded_unity_derivation() {
        let s = indexed();
        let roles = FamilyRoles {
            dot: Some(FamilyProduct::Dot56),
            star: Some(FamilyProduct::Star),
            ..Default::default()
        };
        let w = Window::new(-1, 4).unwrap();
        let b = embed_window(&s, roles, w, true).unwrap();
        let del = crate::constructions::unity_derivation(&b).unwrap();
        for (j, a) in (w.lo..=w.hi).enumerate() {
            let col = del.matrix().column(j);
            for r in 0..b.dim() {
                let expected = if r == j { Scalar::from_i64(Q, a + 1) } else { Q.zero() };
                assert_eq!(col.get(r), &expected);
            }
        }
    }

    #[test]
    fn window_parse() {
        assert_eq!("-5..5".parse::<Window>().unwrap(), Window { lo: -5, hi: 5 });
        assert!("5..-5".parse::<Window>().is_err());
        assert!("x".parse::<Window>().is_err());
    }

    #[test]
    fn sparse_element_display() {
        assert_eq!(SparseElement::zero(Q).to_string(), "0");
        assert_eq!(
            t(1).add(&theta(2).scale(&q("-1/2"))).to_string(),
            "1 t^1 + -1/2 theta t^2"
        );
    }
}
