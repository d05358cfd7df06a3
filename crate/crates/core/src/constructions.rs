//! Constructions that turn one structure into another: twists, derivation
//! products, tensor products and unity derivations.
//!
//! Every constructor checks its hypotheses eagerly. A failed hypothesis is
//! reported as [`Error::Precondition`], carrying the report of the failing
//! checks when one is available.

use crate::algebra::{Algebra, LinearOperator, StructureBundle};
use crate::error::{Error, Result};
use crate::identity::{check_identity, CheckName, IdentityId, ProductRole, Verdict};
use crate::linalg::{solve, Matrix, Vector};
use crate::report::{CheckResult, Report};
use crate::scalar::{Field, Scalar};
use crate::validate::{derivation_verdict, morphism_verdict, validate, StructureKind};

/// Largest search space [`enumerate_endomorphisms`] will walk.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

fn single(id: IdentityId, on: Option<ProductRole>, verdict: Verdict) -> Report {
    Report {
        checks: vec![CheckResult {
            name: CheckName::Identity(id),
            on,
            verdict,
        }],
    }
}

fn require_report(construction: &'static str, condition: &str, report: Report) -> Result<()> {
    if report.passes() {
        Ok(())
    } else {
        Err(Error::failed_report(construction, condition, report))
    }
}

fn require_kind(construction: &'static str, bundle: &StructureBundle, kind: StructureKind) -> Result<()> {
    let report = validate(bundle, kind)?;
    require_report(construction, &format!("input must be {kind}"), report)
}

fn require_morphism(construction: &'static str, a: &Algebra, alpha: &LinearOperator, on: ProductRole) -> Result<()> {
    let verdict = morphism_verdict(a, alpha)?;
    require_report(
        construction,
        &format!("alpha must be an endomorphism of {on}"),
        single(IdentityId::Morphism, Some(on), verdict),
    )
}

fn require_derivation(construction: &'static str, a: &Algebra, del: &LinearOperator) -> Result<()> {
    let verdict = derivation_verdict(a, del)?;
    require_report(
        construction,
        "the map must be a derivation of dot",
        single(IdentityId::Derivation, Some(ProductRole::Dot), verdict),
    )
}

fn require_identity(
    construction: &'static str,
    bundle: &StructureBundle,
    id: IdentityId,
    condition: &str,
) -> Result<()> {
    let verdict = check_identity(bundle, id)?;
    let on = id.reads_subject().then(|| bundle_subject(bundle));
    require_report(construction, condition, single(id, on, verdict))
}

fn bundle_subject(bundle: &StructureBundle) -> ProductRole {
    if bundle.star().is_some() {
        ProductRole::Star
    } else {
        ProductRole::Dot
    }
}

fn require_dims(a: &Algebra, op: &LinearOperator) -> Result<()> {
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

fn dot_of(construction: &'static str, bundle: &StructureBundle) -> Result<Algebra> {
    bundle
        .dot()
        .cloned()
        .ok_or_else(|| Error::precondition(construction, "bundle needs a dot product"))
}

fn star_of(construction: &'static str, bundle: &StructureBundle) -> Result<Algebra> {
    bundle
        .star()
        .cloned()
        .ok_or_else(|| Error::precondition(construction, "bundle needs a star product"))
}

fn del_of(construction: &'static str, bundle: &StructureBundle) -> Result<LinearOperator> {
    bundle
        .del()
        .cloned()
        .ok_or_else(|| Error::precondition(construction, "bundle needs a del map"))
}

/// The (dot, star) pair with nothing else attached.
fn np_pair(construction: &'static str, bundle: &StructureBundle) -> Result<StructureBundle> {
    StructureBundle::from_pair(dot_of(construction, bundle)?, star_of(construction, bundle)?)
}

/// `(A, alpha o mu, alpha)`.
///
/// Requires `alpha` to be an endomorphism of `A`. When `A` is Novikov the
/// result is Hom-Novikov.
pub fn yau_twist(a: &Algebra, alpha: &LinearOperator) -> Result<StructureBundle> {
    const NAME: &str = "yau-twist";
    require_dims(a, alpha)?;
    require_morphism(NAME, a, alpha, ProductRole::Star)?;
    let product = a.twisted_by(alpha.matrix()).with_label(format!("{}_alpha", a.label()));
    StructureBundle::from_star(product).with_alpha(alpha.clone())
}

/// `(A, alpha^n o mu, alpha^(n+1))`.
///
/// When `(A, mu, alpha)` is Hom-Novikov so is the result.
pub fn power_twist(a: &Algebra, alpha: &LinearOperator, n: u32) -> Result<StructureBundle> {
    const NAME: &str = "power-twist";
    if n == 0 {
        return Err(Error::precondition(NAME, "the power must be positive"));
    }
    require_dims(a, alpha)?;
    require_morphism(NAME, a, alpha, ProductRole::Star)?;
    let product = a
        .twisted_by(alpha.pow(n).matrix())
        .with_label(format!("{}_alpha^{n}", a.label()));
    StructureBundle::from_star(product).with_alpha(alpha.pow(n + 1))
}

/// `[x, y] = xy - yx`, with `alpha` carried along.
pub fn commutator_bracket(a: &Algebra, alpha: Option<&LinearOperator>) -> Result<StructureBundle> {
    let bracket = a.commutator().with_label(format!("[,]_{}", a.label()));
    let bundle = StructureBundle::from_star(bracket);
    match alpha {
        Some(al) => {
            require_dims(a, al)?;
            bundle.with_alpha(al.clone())
        }
        None => Ok(bundle),
    }
}

/// First basis index `j` with `alpha^2(e_j) != e_j`.
fn involution_defect(alpha: &LinearOperator) -> Option<(usize, Vector)> {
    let sq = alpha.matrix().mul(alpha.matrix());
    (0..alpha.dim()).find_map(|j| {
        let col = sq.column(j);
        (col != Vector::basis(alpha.field(), alpha.dim(), j)).then_some((j, col))
    })
}

/// `(A, alpha o mu)` from a Hom-Novikov bundle whose twist is an involution.
/// The result is Novikov.
pub fn involutive_untwist(bundle: &StructureBundle) -> Result<Algebra> {
    const NAME: &str = "involutive-untwist";
    let alpha = bundle
        .alpha()
        .ok_or_else(|| Error::precondition(NAME, "bundle needs a twist"))?;
    if let Some((j, image)) = involution_defect(alpha) {
        return Err(Error::precondition(
            NAME,
            format!("alpha is not an involution: alpha^2(e{j}) = {image}"),
        ));
    }
    require_kind(NAME, bundle, StructureKind::HomNovikov)?;
    let a = bundle.subject();
    Ok(a.twisted_by(alpha.matrix()).with_label(format!("{}_alpha", a.label())))
}

/// `[x, y] = alpha^-1(xy - yx)` from a regular Hom-Novikov bundle. The result
/// is a Lie algebra.
pub fn alpha_inverse_bracket(bundle: &StructureBundle) -> Result<Algebra> {
    const NAME: &str = "alpha-inverse-bracket";
    let alpha = bundle
        .alpha()
        .ok_or_else(|| Error::precondition(NAME, "bundle needs a twist"))?;
    let inv = alpha
        .inverse()
        .ok_or_else(|| Error::precondition(NAME, "alpha is singular"))?;
    require_kind(NAME, bundle, StructureKind::HomNovikov)?;
    let a = bundle.subject();
    Ok(a.commutator()
        .twisted_by(inv.matrix())
        .with_label(format!("[,]_alpha^-1 {}", a.label())))
}

fn require_commutative_associative(construction: &'static str, a: &Algebra) -> Result<()> {
    require_kind(
        construction,
        &StructureBundle::from_dot(a.clone()),
        StructureKind::CommutativeAssociative,
    )
}

/// `x * y = x D(y) + lambda xy` for a derivation `D` of a commutative
/// associative algebra. The result is Novikov for every `lambda`.
pub fn gd_lambda_product(a: &Algebra, d: &LinearOperator, lambda: &Scalar) -> Result<Algebra> {
    const NAME: &str = "gd-lambda";
    require_dims(a, d)?;
    if lambda.field() != a.field() {
        return Err(Error::FieldMismatch {
            expected: a.field(),
            found: lambda.field(),
        });
    }
    require_commutative_associative(NAME, a)?;
    require_derivation(NAME, a, d)?;
    let field = a.field();
    let n = a.dim();
    let images: Vec<Vector> = (0..n).map(|j| d.matrix().column(j)).collect();
    Ok(Algebra::from_basis_products(field, n, |i, j| {
        let ei = Vector::basis(field, n, i);
        a.mul_unchecked(&ei, &images[j])
            .add(&a.basis_product(i, j).scale(lambda))
    })
    .with_label(format!("gd({}, {lambda})", a.label())))
}

/// Experimental: `x * y = x D(y) + lambda (xy)` with `lambda` an element of
/// the algebra acting by multiplication. No structure is claimed for the
/// result.
pub fn gd_element_product(a: &Algebra, d: &LinearOperator, lambda: &Vector) -> Result<Algebra> {
    const NAME: &str = "gd-element";
    require_dims(a, d)?;
    a.check_vector(lambda)?;
    require_commutative_associative(NAME, a)?;
    require_derivation(NAME, a, d)?;
    let field = a.field();
    let n = a.dim();
    Ok(Algebra::from_basis_products(field, n, |i, j| {
        let ei = Vector::basis(field, n, i);
        a.mul_unchecked(&ei, &d.matrix().column(j))
            .add(&a.mul_unchecked(lambda, &a.basis_product(i, j)))
    })
    .with_label(format!("gd({}, element)", a.label())))
}

/// `x * y = x . del(y)` as an algebra.
fn del_product(dot: &Algebra, del: &LinearOperator) -> Algebra {
    let field = dot.field();
    let n = dot.dim();
    Algebra::from_basis_products(field, n, |i, j| {
        dot.mul_unchecked(&Vector::basis(field, n, i), &del.matrix().column(j))
    })
    .with_label(format!("{}.del", dot.label()))
}

/// Common hypotheses of the two `x . del(y)` constructions. Returns the dot
/// product, the map and the twist.
fn del_inputs(
    construction: &'static str,
    bundle: &StructureBundle,
) -> Result<(Algebra, LinearOperator, LinearOperator)> {
    let dot = dot_of(construction, bundle)?;
    let del = del_of(construction, bundle)?;
    let alpha = bundle.alpha_or_identity();
    let base = StructureBundle::from_dot(dot.clone()).with_alpha(alpha.clone())?;
    require_kind(construction, &base, StructureKind::HomAssociativeCommutative)?;
    require_morphism(construction, &dot, &alpha, ProductRole::Dot)?;
    let maps = base.with_del(del.clone())?;
    require_identity(
        construction,
        &maps,
        IdentityId::CommuteMaps,
        "del must commute with alpha",
    )?;
    Ok((dot, del, alpha))
}

/// `x * y = x . del(y)` on a commutative Hom-associative algebra, for a map
/// `del` commuting with `alpha` and satisfying `del(x del(y)) = del(x) del(y)`.
/// `del` need not be a derivation. The output `(star, alpha)` is Hom-Novikov;
/// a missing twist is taken to be the identity.
pub fn partial_star_product(bundle: &StructureBundle) -> Result<StructureBundle> {
    const NAME: &str = "partial-star";
    let (dot, del, alpha) = del_inputs(NAME, bundle)?;
    let gd = StructureBundle::from_dot(dot.clone()).with_del(del.clone())?;
    require_identity(
        NAME,
        &gd,
        IdentityId::Gd2,
        "del must satisfy del(x del(y)) = del(x) del(y)",
    )?;
    StructureBundle::from_star(del_product(&dot, &del)).with_alpha(alpha)
}

/// `(dot, x . del(y), alpha)` for a derivation `del` of a commutative
/// Hom-associative algebra commuting with `alpha`. The output is
/// Hom-Novikov-Poisson.
pub fn derivation_np_product(bundle: &StructureBundle) -> Result<StructureBundle> {
    const NAME: &str = "derivation-np";
    let (dot, del, alpha) = del_inputs(NAME, bundle)?;
    require_derivation(NAME, &dot, &del)?;
    let star = del_product(&dot, &del);
    StructureBundle::from_pair(dot, star)?.with_alpha(alpha)
}

/// `(alpha o dot, alpha o star, alpha)` for a Novikov-Poisson pair and an
/// endomorphism of both products.
pub fn np_yau_twist(bundle: &StructureBundle, alpha: &LinearOperator) -> Result<StructureBundle> {
    const NAME: &str = "np-yau-twist";
    let pair = np_pair(NAME, bundle)?;
    require_kind(NAME, &pair, StructureKind::NovikovPoisson)?;
    let dot = dot_of(NAME, bundle)?;
    let star = star_of(NAME, bundle)?;
    require_dims(&dot, alpha)?;
    require_morphism(NAME, &dot, alpha, ProductRole::Dot)?;
    require_morphism(NAME, &star, alpha, ProductRole::Star)?;
    let m = alpha.matrix();
    StructureBundle::from_pair(dot.twisted_by(m), star.twisted_by(m))?.with_alpha(alpha.clone())
}

/// `(x1 (x) x2)(y1 (x) y2) = x1 y1 (x) x2 y2` on the basis `i1 * n2 + i2`.
pub fn tensor_product(a1: &Algebra, a2: &Algebra) -> Algebra {
    let n2 = a2.dim();
    let n = a1.dim() * n2;
    Algebra::from_fn(a1.field(), n, |i, j, k| {
        let (i1, i2) = (i / n2, i % n2);
        let (j1, j2) = (j / n2, j % n2);
        let (k1, k2) = (k / n2, k % n2);
        a1.constant(i1, j1, k1) * a2.constant(i2, j2, k2)
    })
    .with_label(format!("{} (x) {}", a1.label(), a2.label()))
}

/// `mu1 (x) nu2 + nu1 (x) mu2`.
pub fn tensor_star(mu1: &Algebra, nu1: &Algebra, mu2: &Algebra, nu2: &Algebra) -> Algebra {
    tensor_product(mu1, nu2)
        .sum(&tensor_product(nu1, mu2))
        .with_label(format!("{} (x) {} star", nu1.label(), nu2.label()))
}

/// Tensor product of two Novikov-Poisson bundles: dot `nu1 (x) nu2`, star
/// `mu1 (x) nu2 + nu1 (x) mu2`.
///
/// When either bundle carries a twist, both twists (missing ones taken as the
/// identity) must be endomorphisms of their bundle's two products; the output
/// products are then twisted by `alpha (x) beta`, which is also the output
/// twist, and the result is Hom-Novikov-Poisson.
pub fn tensor_np(b1: &StructureBundle, b2: &StructureBundle) -> Result<StructureBundle> {
    const NAME: &str = "tensor-np";
    if b1.field() != b2.field() {
        return Err(Error::FieldMismatch {
            expected: b1.field(),
            found: b2.field(),
        });
    }
    for b in [b1, b2] {
        require_kind(NAME, &np_pair(NAME, b)?, StructureKind::NovikovPoisson)?;
    }
    let (nu1, mu1) = (dot_of(NAME, b1)?, star_of(NAME, b1)?);
    let (nu2, mu2) = (dot_of(NAME, b2)?, star_of(NAME, b2)?);
    let dot = tensor_product(&nu1, &nu2);
    let star = tensor_star(&mu1, &nu1, &mu2, &nu2);
    if b1.alpha().is_none() && b2.alpha().is_none() {
        return StructureBundle::from_pair(dot, star);
    }
    let (a1, a2) = (b1.alpha_or_identity(), b2.alpha_or_identity());
    for (nu, mu, al) in [(&nu1, &mu1, &a1), (&nu2, &mu2, &a2)] {
        require_morphism(NAME, nu, al, ProductRole::Dot)?;
        require_morphism(NAME, mu, al, ProductRole::Star)?;
    }
    let twist = a1.kronecker(&a2);
    let m = twist.matrix();
    StructureBundle::from_pair(dot.twisted_by(m), star.twisted_by(m))?.with_alpha(twist)
}

/// A two-sided unit of `a`, found by solving `u e_i = e_i u = e_i`.
pub fn find_unity(a: &Algebra) -> Option<Vector> {
    let field = a.field();
    let n = a.dim();
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for k in 0..n {
            let target = if i == k { field.one() } else { field.zero() };
            rows.push((0..n).map(|u| a.constant(u, i, k).clone()).collect());
            rhs.push(target.clone());
            rows.push((0..n).map(|u| a.constant(i, u, k).clone()).collect());
            rhs.push(target);
        }
    }
    solve(field, &rows, &rhs, n)
}

/// `del(x) = 1 * x - (1 * 1) . x` for a Novikov-Poisson pair whose dot has a
/// unit. The result is a derivation of dot.
pub fn unity_derivation(bundle: &StructureBundle) -> Result<LinearOperator> {
    const NAME: &str = "unity-derivation";
    let pair = np_pair(NAME, bundle)?;
    require_kind(NAME, &pair, StructureKind::NovikovPoisson)?;
    let dot = dot_of(NAME, bundle)?;
    let star = star_of(NAME, bundle)?;
    let one = find_unity(&dot).ok_or_else(|| Error::precondition(NAME, "dot has no unit"))?;
    let field = dot.field();
    let n = dot.dim();
    let one_one = star.mul_unchecked(&one, &one);
    let images: Vec<Vector> = (0..n)
        .map(|j| {
            let e = Vector::basis(field, n, j);
            star.mul_unchecked(&one, &e).sub(&dot.mul_unchecked(&one_one, &e))
        })
        .collect();
    Ok(LinearOperator::from_images(field, &images).with_label("1*x-(1*1)x"))
}

fn power_size(p: u32, exponent: usize) -> u128 {
    (p as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX)
}

/// Every `n x n` matrix over `GF(p)` that is an endomorphism of `a`, in
/// lexicographic order of row-major entries.
pub fn enumerate_endomorphisms(a: &Algebra) -> Result<Vec<LinearOperator>> {
    let field = a.field();
    let p = match field {
        Field::Prime(p) => p,
        Field::Rational => return Err(Error::NotPrimeField(field)),
    };
    let n = a.dim();
    let size = power_size(p, n * n);
    if size > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    let c: Vec<u64> = a
        .constants()
        .iter()
        .map(|s| s.residue().expect("prime field") as u64)
        .collect();
    let p64 = p as u64;
    let cst = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    let mut m = vec![0u64; n * n];
    let mut out = Vec::new();
    let mut lhs = vec![0u64; n];
    let mut rhs = vec![0u64; n];
    'outer: loop {
        // m[r * n + s] is the coefficient of e_r in alpha(e_s).
        let mut ok = true;
        'pairs: for i in 0..n {
            for j in 0..n {
                // alpha(e_i e_j)
                for r in 0..n {
                    let mut acc = 0u64;
                    for k in 0..n {
                        acc += m[r * n + k] * cst(i, j, k);
                    }
                    lhs[r] = acc % p64;
                }
                // alpha(e_i) alpha(e_j)
                for r in rhs.iter_mut() {
                    *r = 0;
                }
                for u in 0..n {
                    let au = m[u * n + i];
                    if au == 0 {
                        continue;
                    }
                    for v in 0..n {
                        let bv = m[v * n + j];
                        if bv == 0 {
                            continue;
                        }
                        let w = au * bv % p64;
                        for (r, slot) in rhs.iter_mut().enumerate() {
                            *slot = (*slot + w * cst(u, v, r)) % p64;
                        }
                    }
                }
                if lhs != rhs {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            let matrix = Matrix::from_fn(field, n, |r, s| Scalar::from_i64(field, m[r * n + s] as i64));
            out.push(LinearOperator::new(matrix));
        }
        let mut pos = n * n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            m[pos] += 1;
            if m[pos] < p64 {
                break;
            }
            m[pos] = 0;
        }
    }
    Ok(out)
}

/// The endomorphisms of `a` with nonzero determinant.
pub fn enumerate_automorphisms(a: &Algebra) -> Result<Vec<LinearOperator>> {
    Ok(enumerate_endomorphisms(a)?
        .into_iter()
        .filter(|op| op.matrix().is_invertible())
        .collect())
}

/// Every `n x n` matrix over `GF(p)`, in lexicographic order of row-major
/// entries.
pub fn enumerate_matrices(field: Field, n: usize) -> Result<Vec<Matrix>> {
    let p = match field {
        Field::Prime(p) => p,
        Field::Rational => return Err(Error::NotPrimeField(field)),
    };
    let size = power_size(p, n * n);
    if size > ENUMERATION_GUARD {
        return Err(Error::GuardExceeded {
            size,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    for code in 0..size {
        let mut digits = vec![0i64; n * n];
        let mut rest = code;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % p as u128) as i64;
            rest /= p as u128;
        }
        out.push(Matrix::from_fn(field, n, |r, s| {
            Scalar::from_i64(field, digits[r * n + s])
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::validate::map_properties;

    const Q: Field = Field::Rational;

    fn passes(b: &StructureBundle, kind: StructureKind) -> bool {
        validate(b, kind).unwrap().passes()
    }

    fn is_precondition(e: Error) -> bool {
        matches!(e, Error::Precondition { .. })
    }

    #[test]
    fn yau_twist_examples() {
        let d = dual_numbers(Q);
        let out = yau_twist(&d, &LinearOperator::identity(Q, 2)).unwrap();
        assert!(out.subject().same_constants(&d));

        let out = yau_twist(&d, &eps_projection(Q)).unwrap();
        let expected = Algebra::from_i64_entries(Q, 2, &[(0, 0, 0, 1)]);
        assert!(out.subject().same_constants(&expected));
        assert!(passes(&out, StructureKind::HomNovikov));

        let err = yau_twist(&d, &swap(Q)).unwrap_err();
        let Error::Precondition { report, .. } = err else {
            panic!()
        };
        let report = report.unwrap();
        let w = report.first_failure().unwrap().verdict.witness().unwrap();
        assert_eq!(w.tuple, vec![0, 0]);
    }

    #[test]
    fn power_twist_examples() {
        let d = dual_numbers(Q);
        let id = LinearOperator::identity(Q, 2);
        let out = power_twist(&d, &id, 1).unwrap();
        assert!(out.subject().same_constants(&d));
        assert!(out.alpha().unwrap().is_identity());

        let neg = eps_negation(Q);
        let out = power_twist(&d, &neg, 2).unwrap();
        assert_eq!(out.alpha().unwrap().matrix(), &neg.matrix().pow(3));

        // A Hom-Novikov input stays Hom-Novikov.
        let t = truncated_polynomials(Q, 3);
        let two = scaling(Q, 3, &Scalar::from_i64(Q, 2));
        let hom = yau_twist(&t, &two).unwrap();
        let out = power_twist(hom.subject(), &two, 1).unwrap();
        assert!(passes(&out, StructureKind::HomNovikov));
        assert!(passes(
            &power_twist(hom.subject(), &two, 3).unwrap(),
            StructureKind::HomNovikov
        ));
        assert!(power_twist(&d, &id, 0).is_err());
    }

    #[test]
    fn alpha_times_product_need_not_be_novikov() {
        // eps -> -eps on the dual numbers: alpha o mu fails right-commute.
        let d = dual_numbers(Q);
        let twisted = StructureBundle::from_star(d.twisted_by(eps_negation(Q).matrix()));
        assert!(!passes(&twisted, StructureKind::Novikov));
    }

    #[test]
    fn commutator_examples() {
        let d = dual_numbers(Q);
        assert!(commutator_bracket(&d, None).unwrap().subject().is_zero_product());
        let star = gd_lambda_product(&d, &eps_derivation(Q), &Q.zero()).unwrap();
        let br = commutator_bracket(&star, Some(&LinearOperator::identity(Q, 2))).unwrap();
        // [1, eps] = 1 . eps - eps . 0 = eps
        assert_eq!(br.subject().basis_product(0, 1), Vector::from_i64s(Q, &[0, 1]));
        assert_eq!(br.subject().basis_product(1, 0), Vector::from_i64s(Q, &[0, -1]));
        assert!(passes(&br, StructureKind::HomLie));
    }

    #[test]
    fn involutive_untwist_round_trip() {
        let d = dual_numbers(Q);
        let id = LinearOperator::identity(Q, 2);
        let b = StructureBundle::from_star(d.clone()).with_alpha(id).unwrap();
        assert!(involutive_untwist(&b).unwrap().same_constants(&d));

        let twisted = yau_twist(&d, &eps_negation(Q)).unwrap();
        let back = involutive_untwist(&twisted).unwrap();
        assert!(back.same_constants(&d));
        assert!(passes(&StructureBundle::from_star(back), StructureKind::Novikov));

        let bad = yau_twist(&d, &eps_projection(Q)).unwrap();
        let err = involutive_untwist(&bad).unwrap_err();
        assert!(err.to_string().contains("alpha^2(e1)"), "{err}");
    }

    #[test]
    fn alpha_inverse_bracket_examples() {
        let d = dual_numbers(Q);
        let star = gd_lambda_product(&d, &eps_derivation(Q), &Q.one()).unwrap();
        let b = StructureBundle::from_star(star.clone())
            .with_alpha(LinearOperator::identity(Q, 2))
            .unwrap();
        let lie = alpha_inverse_bracket(&b).unwrap();
        assert!(lie.same_constants(&star.commutator()));
        let lb = StructureBundle::from_star(lie)
            .with_alpha(LinearOperator::identity(Q, 2))
            .unwrap();
        assert!(passes(&lb, StructureKind::HomLie));

        let singular = yau_twist(&d, &eps_projection(Q)).unwrap();
        let err = alpha_inverse_bracket(&singular).unwrap_err();
        assert!(err.to_string().contains("singular"));

        // Regular twist of a noncommutative Novikov algebra.
        let two = scaling(Q, 2, &Scalar::from_i64(Q, 3));
        let hom = yau_twist(&star, &two).unwrap();
        let lie = alpha_inverse_bracket(&hom).unwrap();
        assert!(lie.same_constants(&star.commutator()));
    }

    #[test]
    fn gd_lambda_tables() {
        let d = dual_numbers(Q);
        let del = eps_derivation(Q);
        let s0 = gd_lambda_product(&d, &del, &Q.zero()).unwrap();
        let expect0 = Algebra::from_i64_entries(Q, 2, &[(0, 1, 1, 1)]);
        assert!(s0.same_constants(&expect0));
        assert!(passes(&StructureBundle::from_star(s0), StructureKind::Novikov));

        let s1 = gd_lambda_product(&d, &del, &Q.one()).unwrap();
        let expect1 = Algebra::from_i64_entries(Q, 2, &[(0, 0, 0, 1), (0, 1, 1, 2), (1, 0, 1, 1)]);
        assert!(s1.same_constants(&expect1));
        assert!(passes(&StructureBundle::from_star(s1), StructureKind::Novikov));

        let s = gd_lambda_product(&d, &LinearOperator::zero(Q, 2), &Q.one()).unwrap();
        assert!(s.same_constants(&d));

        // eps -> 1 is not a derivation: eps^2 = 0 but 2 eps D(eps) = 2 eps.
        let shift = LinearOperator::new(Matrix::from_rows_i64(Q, &[&[0, 1], &[0, 0]]));
        assert!(is_precondition(gd_lambda_product(&d, &shift, &Q.zero()).unwrap_err()));
        let err = gd_lambda_product(&left_unit(Q), &del, &Q.zero()).unwrap_err();
        assert!(err.to_string().contains("commutative-associative"), "{err}");
    }

    #[test]
    fn gd_lambda_on_truncated_polynomials() {
        let t = truncated_polynomials(Q, 4);
        let e = euler_derivation(Q, 4);
        for l in ["0", "1", "-3/2", "7"] {
            let s = gd_lambda_product(&t, &e, &Scalar::parse(Q, l).unwrap()).unwrap();
            assert!(
                passes(&StructureBundle::from_star(s), StructureKind::Novikov),
                "lambda {l}"
            );
        }
    }

    #[test]
    fn gd_element_is_total() {
        let d = dual_numbers(Q);
        let out = gd_element_product(&d, &eps_derivation(Q), &Vector::from_i64s(Q, &[0, 0])).unwrap();
        assert!(out.same_constants(&gd_lambda_product(&d, &eps_derivation(Q), &Q.zero()).unwrap()));
        let one = gd_element_product(&d, &eps_derivation(Q), &Vector::from_i64s(Q, &[1, 0])).unwrap();
        assert!(one.same_constants(&gd_lambda_product(&d, &eps_derivation(Q), &Q.one()).unwrap()));
    }

    #[test]
    fn partial_star_examples() {
        let d = dual_numbers(Q);
        let zero = StructureBundle::from_dot(d.clone())
            .with_del(LinearOperator::zero(Q, 2))
            .unwrap();
        let out = partial_star_product(&zero).unwrap();
        assert!(out.subject().is_zero_product());
        assert!(passes(&out, StructureKind::HomNovikov));

        // A projection onto the unit: del(del x del y) = del x del y holds,
        // Leibniz does not.
        let t = truncated_polynomials(Q, 3);
        let proj = LinearOperator::diagonal(Q, &[Q.one(), Q.zero(), Q.zero()]);
        assert!(!map_properties(&t, &proj).unwrap().derivation);
        let b = StructureBundle::from_dot(t.clone()).with_del(proj).unwrap();
        let out = partial_star_product(&b).unwrap();
        assert!(passes(&out, StructureKind::HomNovikov));
        assert!(passes(
            &StructureBundle::from_star(out.subject().clone()),
            StructureKind::Novikov
        ));

        // gd2 failure: Euler map on F[t]/(t^3): del(t del t) = t, del t del t = t^2.
        let b = StructureBundle::from_dot(t).with_del(euler_derivation(Q, 3)).unwrap();
        let err = partial_star_product(&b).unwrap_err();
        assert!(err.to_string().contains("gd2"), "{err}");
    }

    #[test]
    fn partial_star_requires_commuting_maps() {
        let t = truncated_polynomials(Q, 3);
        let two = scaling(Q, 3, &Scalar::from_i64(Q, 2));
        let twisted = t.twisted_by(two.matrix());
        let off = LinearOperator::new(Matrix::from_rows_i64(Q, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]));
        let b = StructureBundle::from_dot(twisted)
            .with_alpha(two)
            .unwrap()
            .with_del(off)
            .unwrap();
        let err = partial_star_product(&b).unwrap_err();
        assert!(err.to_string().contains("commute-maps"), "{err}");
    }

    #[test]
    fn derivation_np_on_truncated_polynomials() {
        let t = truncated_polynomials(Q, 4);
        let e = euler_derivation(Q, 4);
        let b = StructureBundle::from_dot(t.clone()).with_del(e.clone()).unwrap();
        let out = derivation_np_product(&b).unwrap();
        assert!(passes(&out, StructureKind::HomNovikovPoisson));
        assert!(passes(&out.clone().without_alpha(), StructureKind::NovikovPoisson));

        let two = scaling(Q, 4, &Scalar::from_i64(Q, 2));
        let b = StructureBundle::from_dot(t.twisted_by(two.matrix()))
            .with_alpha(two)
            .unwrap()
            .with_del(e)
            .unwrap();
        let out = derivation_np_product(&b).unwrap();
        assert!(passes(&out, StructureKind::HomNovikovPoisson));

        let z = StructureBundle::from_dot(t)
            .with_del(LinearOperator::zero(Q, 4))
            .unwrap();
        let out = derivation_np_product(&z).unwrap();
        assert!(out.star().unwrap().is_zero_product());
        assert!(passes(&out, StructureKind::HomNovikovPoisson));
    }

    fn dual_np() -> StructureBundle {
        let d = dual_numbers(Q);
        let star = gd_lambda_product(&d, &eps_derivation(Q), &Q.zero()).unwrap();
        StructureBundle::from_pair(d, star).unwrap()
    }

    #[test]
    fn np_yau_twist_examples() {
        let np = dual_np();
        assert!(passes(&np, StructureKind::NovikovPoisson));
        let out = np_yau_twist(&np, &LinearOperator::identity(Q, 2)).unwrap();
        assert!(out.dot().unwrap().same_constants(np.dot().unwrap()));
        assert!(out.star().unwrap().same_constants(np.star().unwrap()));

        let out = np_yau_twist(&np, &eps_projection(Q)).unwrap();
        assert!(passes(&out, StructureKind::HomNovikovPoisson));
        assert!(is_precondition(np_yau_twist(&np, &swap(Q)).unwrap_err()));
    }

    #[test]
    fn tensor_examples() {
        let np = dual_np();
        let unit = StructureBundle::from_pair(ground_field(Q), Algebra::zero(Q, 1)).unwrap();
        let out = tensor_np(&np, &unit).unwrap();
        assert!(out.star().unwrap().same_constants(np.star().unwrap()));
        assert!(out.dot().unwrap().same_constants(np.dot().unwrap()));

        let out = tensor_np(&np, &np).unwrap();
        assert_eq!(out.dim(), 4);
        assert!(passes(&out, StructureKind::NovikovPoisson));

        let twisted = np.clone().with_alpha(eps_projection(Q)).unwrap();
        let out = tensor_np(&twisted, &np).unwrap();
        assert!(passes(&out, StructureKind::HomNovikovPoisson));
    }

    #[test]
    fn tensor_twist_interchange() {
        let d = dual_numbers(Q);
        let a = eps_projection(Q);
        let b = LinearOperator::identity(Q, 2);
        let lhs = tensor_product(&d.twisted_by(a.matrix()), &d.twisted_by(b.matrix()));
        let rhs = tensor_product(&d, &d).twisted_by(a.kronecker(&b).matrix());
        assert!(lhs.same_constants(&rhs));
    }

    #[test]
    fn unity_derivation_examples() {
        let np = dual_np();
        let del = unity_derivation(&np).unwrap();
        assert_eq!(del.matrix(), eps_derivation(Q).matrix());

        let zero = StructureBundle::from_pair(dual_numbers(Q), Algebra::zero(Q, 2)).unwrap();
        assert!(unity_derivation(&zero).unwrap().matrix().is_zero());

        let nounit = StructureBundle::from_pair(square_to_e1(Q), Algebra::zero(Q, 2)).unwrap();
        let err = unity_derivation(&nounit).unwrap_err();
        assert!(err.to_string().contains("no unit"), "{err}");

        let t = truncated_polynomials(Q, 4);
        let np = StructureBundle::from_pair(
            t.clone(),
            gd_lambda_product(&t, &euler_derivation(Q, 4), &Scalar::from_i64(Q, 5)).unwrap(),
        )
        .unwrap();
        let del = unity_derivation(&np).unwrap();
        assert!(map_properties(&t, &del).unwrap().derivation);
        assert_eq!(del.matrix(), euler_derivation(Q, 4).matrix());
    }

    #[test]
    fn find_unity_examples() {
        assert_eq!(find_unity(&dual_numbers(Q)), Some(Vector::from_i64s(Q, &[1, 0])));
        assert_eq!(find_unity(&square_to_e1(Q)), None);
        assert_eq!(find_unity(&left_unit(Q)), None);
        assert_eq!(find_unity(&Algebra::zero(Q, 0)), Some(Vector::zero(Q, 0)));
    }

    #[test]
    fn enumeration_examples() {
        let f2 = Field::prime(2).unwrap();
        let all = enumerate_endomorphisms(&Algebra::zero(f2, 1)).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all[0].matrix().is_zero());
        assert!(all[1].is_identity());

        let ends = enumerate_endomorphisms(&dual_numbers(f2)).unwrap();
        assert!(ends.iter().any(|e| e.is_identity()));
        assert!(ends.iter().any(|e| e.matrix() == eps_projection(f2).matrix()));
        // Oracle: filter all 16 matrices through the generic engine.
        let oracle: Vec<Matrix> = enumerate_matrices(f2, 2)
            .unwrap()
            .into_iter()
            .filter(|m| {
                morphism_verdict(&dual_numbers(f2), &LinearOperator::new(m.clone()))
                    .unwrap()
                    .holds()
            })
            .collect();
        let got: Vec<Matrix> = ends.iter().map(|e| e.matrix().clone()).collect();
        assert_eq!(got, oracle);

        let f5 = Field::prime(5).unwrap();
        assert!(matches!(
            enumerate_endomorphisms(&Algebra::zero(f5, 3)),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(
            enumerate_endomorphisms(&dual_numbers(Q)),
            Err(Error::NotPrimeField(_))
        ));
        assert_eq!(enumerate_endomorphisms(&Algebra::zero(f5, 0)).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let f3 = Field::prime(3).unwrap();
        let ms = enumerate_matrices(f3, 2).unwrap();
        assert_eq!(ms.len(), 81);
        let keys: Vec<Vec<u32>> = ms
            .iter()
            .map(|m| m.entries().iter().map(|s| s.residue().unwrap()).collect())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
