//! The identity catalog and the basis-tuple verification engine.
//!
//! Every cataloged identity is multilinear in its arguments, so it holds on
//! the whole space iff it holds on every tuple of basis elements. The engine
//! walks tuples in lexicographic order and reports the first failure, which
//! makes the witness the lexicographically smallest failing tuple.
//!
//! The engine is generic over [`Evaluator`], which is implemented both for
//! finite [`StructureBundle`]s and for the windowed sparse families.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::StructureBundle;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::{Field, Scalar};

/// A component of a structure bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Dot,
    Star,
    Alpha,
    Del,
    Form,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Dot => "dot",
            Role::Star => "star",
            Role::Alpha => "alpha",
            Role::Del => "del",
            Role::Form => "form",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductRole {
    Dot,
    Star,
}

impl ProductRole {
    pub fn role(self) -> Role {
        match self {
            ProductRole::Dot => Role::Dot,
            ProductRole::Star => Role::Star,
        }
    }
}

impl fmt::Display for ProductRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.role().fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapRole {
    Alpha,
    Del,
}

impl MapRole {
    pub fn role(self) -> Role {
        match self {
            MapRole::Alpha => Role::Alpha,
            MapRole::Del => Role::Del,
        }
    }
}

macro_rules! identities {
    ($($variant:ident => $name:literal, $arity:literal;)*) => {
        /// The closed catalog of identities.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum IdentityId {
            $($variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }

            /// Number of arguments the identity quantifies over.
            pub fn arity(self) -> usize {
                match self {
                    $(IdentityId::$variant => $arity,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(IdentityId::$variant),)*
                    _ => Err(Error::Unknown { what: "identity", name: s.to_string() }),
                }
            }
        }
    };
}

identities! {
    RightCommute => "right-commute", 3;
    LeftSymmetry => "left-symmetry", 3;
    Commutativity => "commutativity", 2;
    Associativity => "associativity", 3;
    HomAssociativity => "hom-associativity", 3;
    HomRightCommute => "hom-right-commute", 3;
    HomLeftSymmetry => "hom-left-symmetry", 3;
    SkewSymmetry => "skew-symmetry", 2;
    HomJacobi => "hom-jacobi", 3;
    J1 => "j1", 3;
    J2 => "j2", 3;
    Np1 => "np-1", 3;
    Np2 => "np-2", 3;
    HomNp1 => "hom-np-1", 3;
    HomNp2 => "hom-np-2", 3;
    Morphism => "morphism", 2;
    Derivation => "derivation", 2;
    Gd2 => "gd2", 2;
    CommuteMaps => "commute-maps", 1;
    FormAssoc => "form-assoc", 3;
    FormLieInvariance => "form-lie-invariance", 3;
    FormHomInvariance => "form-hom-invariance", 3;
    FormAlphaCompat => "form-alpha-compat", 2;
    FormSymmetry => "form-symmetry", 2;
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl IdentityId {
    /// Whether the identity compares scalars (form identities) rather than elements.
    pub fn is_form_identity(self) -> bool {
        use IdentityId::*;
        matches!(
            self,
            FormAssoc | FormLieInvariance | FormHomInvariance | FormAlphaCompat | FormSymmetry
        )
    }

    /// Whether the identity reads a single "subject" product.
    pub fn reads_subject(self) -> bool {
        use IdentityId::*;
        !matches!(
            self,
            Np1 | Np2 | HomNp1 | HomNp2 | CommuteMaps | FormAlphaCompat | FormSymmetry
        )
    }

    /// Roles read by the identity when single-product parts act on `subject`.
    pub fn roles(self, subject: ProductRole) -> Vec<Role> {
        use IdentityId::*;
        let p = subject.role();
        match self {
            RightCommute | LeftSymmetry | Commutativity | Associativity | SkewSymmetry => vec![p],
            HomAssociativity | HomRightCommute | HomLeftSymmetry | HomJacobi | J1 | J2 | Morphism => {
                vec![p, Role::Alpha]
            }
            Np1 | Np2 => vec![Role::Dot, Role::Star],
            HomNp1 | HomNp2 => vec![Role::Dot, Role::Star, Role::Alpha],
            Derivation | Gd2 => vec![p, Role::Del],
            CommuteMaps => vec![Role::Alpha, Role::Del],
            FormAssoc | FormLieInvariance => vec![p, Role::Form],
            FormHomInvariance => vec![p, Role::Alpha, Role::Form],
            FormAlphaCompat => vec![Role::Alpha, Role::Form],
            FormSymmetry => vec![Role::Form],
        }
    }
}

/// Exact arithmetic over some space with a fixed, ordered basis.
pub trait Evaluator {
    type Index: Clone + Ord + fmt::Debug;
    type Elem: Clone + PartialEq + fmt::Debug;

    fn field(&self) -> Field;
    /// Basis indices, sorted ascending.
    fn basis(&self) -> Vec<Self::Index>;
    fn basis_element(&self, index: &Self::Index) -> Self::Elem;
    fn has_role(&self, role: Role) -> bool;

    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, s: &Scalar, x: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn product(&self, role: ProductRole, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn map(&self, role: MapRole, x: &Self::Elem) -> Result<Self::Elem>;
    fn form(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Scalar>;

    /// `None` when the form is nondegenerate, otherwise a nonzero radical element.
    fn form_radical(&self) -> Result<Option<Self::Elem>>;

    /// Default subject product: `star` if present, else `dot`.
    fn default_subject(&self) -> ProductRole {
        if self.has_role(Role::Star) {
            ProductRole::Star
        } else {
            ProductRole::Dot
        }
    }
}

/// One side of an evaluated identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value<E> {
    Element(E),
    Scalar(Scalar),
}

impl<E: fmt::Display> fmt::Display for Value<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Element(e) => e.fmt(f),
            Value::Scalar(s) => s.fmt(f),
        }
    }
}

/// What a check verified: a cataloged identity or form nondegeneracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckName {
    Identity(IdentityId),
    Nondegenerate,
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckName::Identity(id) => id.fmt(f),
            CheckName::Nondegenerate => f.write_str("nondegenerate"),
        }
    }
}

/// A failing input together with both evaluated sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<I, E> {
    pub check: CheckName,
    pub tuple: Vec<I>,
    pub lhs: Value<E>,
    pub rhs: Value<E>,
}

/// Outcome of a check. A witness is present exactly when the check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<I = usize, E = Vector> {
    witness: Option<Witness<I, E>>,
}

impl<I, E> Verdict<I, E> {
    pub fn pass() -> Self {
        Verdict { witness: None }
    }

    pub fn fail(witness: Witness<I, E>) -> Self {
        Verdict { witness: Some(witness) }
    }

    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness<I, E>> {
        self.witness.as_ref()
    }
}

/// Verdict of [`random_sanity`]: the witness tuple holds the random inputs.
pub type SanityVerdict<E = Vector> = Verdict<E, E>;

fn require<E: Evaluator + ?Sized>(ev: &E, id: IdentityId, subject: ProductRole) -> Result<()> {
    for role in id.roles(subject) {
        if !ev.has_role(role) {
            return Err(Error::MissingRole { identity: id, role });
        }
    }
    Ok(())
}

/// Left and right side of an identity.
pub type Sides<E> = (Value<E>, Value<E>);

/// Evaluates both sides of `id` on arbitrary arguments.
pub fn evaluate<E: Evaluator + ?Sized>(
    ev: &E,
    id: IdentityId,
    subject: ProductRole,
    args: &[E::Elem],
) -> Result<Sides<E::Elem>> {
    use IdentityId::*;
    debug_assert_eq!(args.len(), id.arity());
    let p = |a: &E::Elem, b: &E::Elem| ev.product(subject, a, b);
    let dot = |a: &E::Elem, b: &E::Elem| ev.product(ProductRole::Dot, a, b);
    let star = |a: &E::Elem, b: &E::Elem| ev.product(ProductRole::Star, a, b);
    let alpha = |a: &E::Elem| ev.map(MapRole::Alpha, a);
    let del = |a: &E::Elem| ev.map(MapRole::Del, a);
    let comm = |a: &E::Elem, b: &E::Elem| -> Result<E::Elem> { Ok(ev.sub(&p(a, b)?, &p(b, a)?)) };
    let el = |e: E::Elem| Value::Element(e);
    let sc = |s: Scalar| Value::<E::Elem>::Scalar(s);

    let x = &args[0];
    let (lhs, rhs) = match id {
        RightCommute => {
            let (y, z) = (&args[1], &args[2]);
            (el(p(&p(x, y)?, z)?), el(p(&p(x, z)?, y)?))
        }
        LeftSymmetry => {
            let (y, z) = (&args[1], &args[2]);
            let l = ev.sub(&p(&p(x, y)?, z)?, &p(x, &p(y, z)?)?);
            let r = ev.sub(&p(&p(y, x)?, z)?, &p(y, &p(x, z)?)?);
            (el(l), el(r))
        }
        Commutativity => {
            let y = &args[1];
            (el(p(x, y)?), el(p(y, x)?))
        }
        Associativity => {
            let (y, z) = (&args[1], &args[2]);
            (el(p(&p(x, y)?, z)?), el(p(x, &p(y, z)?)?))
        }
        HomAssociativity => {
            let (y, z) = (&args[1], &args[2]);
            (el(p(&alpha(x)?, &p(y, z)?)?), el(p(&p(x, y)?, &alpha(z)?)?))
        }
        HomRightCommute => {
            let (y, z) = (&args[1], &args[2]);
            (el(p(&p(x, y)?, &alpha(z)?)?), el(p(&p(x, z)?, &alpha(y)?)?))
        }
        HomLeftSymmetry => {
            let (y, z) = (&args[1], &args[2]);
            let l = ev.sub(&p(&p(x, y)?, &alpha(z)?)?, &p(&alpha(x)?, &p(y, z)?)?);
            let r = ev.sub(&p(&p(y, x)?, &alpha(z)?)?, &p(&alpha(y)?, &p(x, z)?)?);
            (el(l), el(r))
        }
        SkewSymmetry => {
            let y = &args[1];
            (el(p(x, y)?), el(ev.sub(&ev.zero(), &p(y, x)?)))
        }
        HomJacobi => {
            let (y, z) = (&args[1], &args[2]);
            let a = p(&p(x, y)?, &alpha(z)?)?;
            let b = p(&p(z, x)?, &alpha(y)?)?;
            let c = p(&p(y, z)?, &alpha(x)?)?;
            (el(ev.add(&ev.add(&a, &b), &c)), el(ev.zero()))
        }
        J1 => {
            let (y, z) = (&args[1], &args[2]);
            let a = p(&comm(x, y)?, &alpha(z)?)?;
            let b = p(&comm(y, z)?, &alpha(x)?)?;
            let c = p(&comm(z, x)?, &alpha(y)?)?;
            (el(ev.add(&ev.add(&a, &b), &c)), el(ev.zero()))
        }
        J2 => {
            let (y, z) = (&args[1], &args[2]);
            let a = p(&alpha(x)?, &comm(y, z)?)?;
            let b = p(&alpha(y)?, &comm(z, x)?)?;
            let c = p(&alpha(z)?, &comm(x, y)?)?;
            (el(ev.add(&ev.add(&a, &b), &c)), el(ev.zero()))
        }
        Np1 => {
            let (y, z) = (&args[1], &args[2]);
            (el(star(&dot(x, y)?, z)?), el(dot(x, &star(y, z)?)?))
        }
        Np2 => {
            let (y, z) = (&args[1], &args[2]);
            let l = ev.sub(&dot(&star(x, y)?, z)?, &star(x, &dot(y, z)?)?);
            let r = ev.sub(&dot(&star(y, x)?, z)?, &star(y, &dot(x, z)?)?);
            (el(l), el(r))
        }
        HomNp1 => {
            let (y, z) = (&args[1], &args[2]);
            (el(star(&dot(x, y)?, &alpha(z)?)?), el(dot(&alpha(x)?, &star(y, z)?)?))
        }
        HomNp2 => {
            let (y, z) = (&args[1], &args[2]);
            let l = ev.sub(&dot(&star(x, y)?, &alpha(z)?)?, &star(&alpha(x)?, &dot(y, z)?)?);
            let r = ev.sub(&dot(&star(y, x)?, &alpha(z)?)?, &star(&alpha(y)?, &dot(x, z)?)?);
            (el(l), el(r))
        }
        Morphism => {
            let y = &args[1];
            (el(alpha(&p(x, y)?)?), el(p(&alpha(x)?, &alpha(y)?)?))
        }
        Derivation => {
            let y = &args[1];
            let r = ev.add(&p(&del(x)?, y)?, &p(x, &del(y)?)?);
            (el(del(&p(x, y)?)?), el(r))
        }
        Gd2 => {
            let y = &args[1];
            (el(del(&p(x, &del(y)?)?)?), el(p(&del(x)?, &del(y)?)?))
        }
        CommuteMaps => (el(del(&alpha(x)?)?), el(alpha(&del(x)?)?)),
        FormAssoc | FormLieInvariance => {
            let (y, z) = (&args[1], &args[2]);
            (sc(ev.form(&p(x, y)?, z)?), sc(ev.form(x, &p(y, z)?)?))
        }
        FormHomInvariance => {
            let (y, z) = (&args[1], &args[2]);
            (sc(ev.form(&p(x, y)?, &alpha(z)?)?), sc(ev.form(&alpha(x)?, &p(y, z)?)?))
        }
        FormAlphaCompat => {
            let y = &args[1];
            (sc(ev.form(&alpha(x)?, y)?), sc(ev.form(x, &alpha(y)?)?))
        }
        FormSymmetry => {
            let y = &args[1];
            (sc(ev.form(x, y)?), sc(ev.form(y, x)?))
        }
    };
    Ok((lhs, rhs))
}

fn sides_agree<E: Evaluator + ?Sized>(ev: &E, lhs: &Value<E::Elem>, rhs: &Value<E::Elem>) -> bool {
    match (lhs, rhs) {
        (Value::Element(a), Value::Element(b)) => ev.is_zero(&ev.sub(a, b)),
        (Value::Scalar(a), Value::Scalar(b)) => a == b,
        _ => false,
    }
}

/// Checks `id` on every basis tuple, single-product parts acting on `subject`.
pub fn check_with<E: Evaluator + ?Sized>(
    ev: &E,
    id: IdentityId,
    subject: ProductRole,
) -> Result<Verdict<E::Index, E::Elem>> {
    require(ev, id, subject)?;
    let basis = ev.basis();
    let elems: Vec<E::Elem> = basis.iter().map(|b| ev.basis_element(b)).collect();
    let arity = id.arity();
    if basis.is_empty() {
        return Ok(Verdict::pass());
    }
    let mut counter = vec![0usize; arity];
    let mut args: Vec<E::Elem> = Vec::with_capacity(arity);
    loop {
        args.clear();
        args.extend(counter.iter().map(|&c| elems[c].clone()));
        let (lhs, rhs) = evaluate(ev, id, subject, &args)?;
        if !sides_agree(ev, &lhs, &rhs) {
            return Ok(Verdict::fail(Witness {
                check: CheckName::Identity(id),
                tuple: counter.iter().map(|&c| basis[c].clone()).collect(),
                lhs,
                rhs,
            }));
        }
        // Odometer, last position fastest: lexicographic order.
        let mut pos = arity;
        loop {
            if pos == 0 {
                return Ok(Verdict::pass());
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < basis.len() {
                break;
            }
            counter[pos] = 0;
        }
    }
}

/// Evaluates `id` on `trials` tuples of seeded pseudo-random elements.
pub fn random_sanity_with<E: Evaluator + ?Sized>(
    ev: &E,
    id: IdentityId,
    subject: ProductRole,
    trials: usize,
    seed: u64,
) -> Result<SanityVerdict<E::Elem>> {
    require(ev, id, subject)?;
    let field = ev.field();
    let basis: Vec<E::Elem> = ev.basis().iter().map(|b| ev.basis_element(b)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let args: Vec<E::Elem> = (0..id.arity())
            .map(|_| {
                basis.iter().fold(ev.zero(), |acc, b| {
                    let c = random_scalar(field, &mut rng);
                    ev.add(&acc, &ev.scale(&c, b))
                })
            })
            .collect();
        let (lhs, rhs) = evaluate(ev, id, subject, &args)?;
        if !sides_agree(ev, &lhs, &rhs) {
            return Ok(Verdict::fail(Witness {
                check: CheckName::Identity(id),
                tuple: args,
                lhs,
                rhs,
            }));
        }
    }
    Ok(Verdict::pass())
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
        Field::Rational => {
            let num = rng.gen_range(-6i64..=6);
            let den = rng.gen_range(1i64..=3);
            Scalar::from_ratio(field, num.into(), den.into()).expect("nonzero denominator")
        }
    }
}

impl Evaluator for StructureBundle {
    type Index = usize;
    type Elem = Vector;

    fn field(&self) -> Field {
        StructureBundle::field(self)
    }

    fn basis(&self) -> Vec<usize> {
        (0..self.dim()).collect()
    }

    fn basis_element(&self, index: &usize) -> Vector {
        Vector::basis(self.field(), self.dim(), *index)
    }

    fn has_role(&self, role: Role) -> bool {
        match role {
            Role::Dot => self.dot.is_some(),
            Role::Star => self.star.is_some(),
            Role::Alpha => self.alpha.is_some(),
            Role::Del => self.del.is_some(),
            Role::Form => self.form.is_some(),
        }
    }

    fn zero(&self) -> Vector {
        Vector::zero(self.field(), self.dim())
    }

    fn add(&self, x: &Vector, y: &Vector) -> Vector {
        x.add(y)
    }

    fn sub(&self, x: &Vector, y: &Vector) -> Vector {
        x.sub(y)
    }

    fn scale(&self, s: &Scalar, x: &Vector) -> Vector {
        x.scale(s)
    }

    fn is_zero(&self, x: &Vector) -> bool {
        x.is_zero()
    }

    fn product(&self, role: ProductRole, x: &Vector, y: &Vector) -> Result<Vector> {
        let a = match role {
            ProductRole::Dot => self.dot.as_ref(),
            ProductRole::Star => self.star.as_ref(),
        };
        let a = a.ok_or(Error::RoleAbsent(role.role()))?;
        Ok(a.mul_unchecked(x, y))
    }

    fn map(&self, role: MapRole, x: &Vector) -> Result<Vector> {
        let m = match role {
            MapRole::Alpha => self.alpha.as_ref(),
            MapRole::Del => self.del.as_ref(),
        };
        let m = m.ok_or(Error::RoleAbsent(role.role()))?;
        Ok(m.apply(x))
    }

    fn form(&self, x: &Vector, y: &Vector) -> Result<Scalar> {
        let b = self.form.as_ref().ok_or(Error::RoleAbsent(Role::Form))?;
        Ok(b.eval(x, y))
    }

    fn form_radical(&self) -> Result<Option<Vector>> {
        let b = self.form.as_ref().ok_or(Error::RoleAbsent(Role::Form))?;
        Ok(b.radical_vector())
    }
}

/// Checks `id` on all basis tuples of the bundle; single-product parts read
/// `star` when present, else `dot`.
pub fn check_identity(bundle: &StructureBundle, id: IdentityId) -> Result<Verdict> {
    check_with(bundle, id, bundle.default_subject())
}

/// Like [`check_identity`] with an explicit subject product.
pub fn check_identity_on(bundle: &StructureBundle, id: IdentityId, subject: ProductRole) -> Result<Verdict> {
    check_with(bundle, id, subject)
}

/// Seeded random-vector evaluation of `id`; a failure here implies a basis
/// failure exists.
pub fn random_sanity(bundle: &StructureBundle, id: IdentityId, trials: usize, seed: u64) -> Result<SanityVerdict> {
    random_sanity_with(bundle, id, bundle.default_subject(), trials, seed)
}

/// The associator `(xy)z - x(yz)` of a bare algebra.
pub fn associator(algebra: &crate::algebra::Algebra, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
    algebra.associator(x, y, z)
}
