use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use homnov_core::constructions::{self, find_unity};
use homnov_core::families::{
    embed_window, family_map, window_validate, window_verify, FamilyMap, FamilyProduct, FamilyRoles, FamilySpec,
    GradedIndex, SparseElement, Window,
};
use homnov_core::quadratic::{self, center, lower_central_series, nilpotency_report, HomLieMode, Subspace};
use homnov_core::{
    check_identity, random_sanity, validate_with_options, CheckName, CheckResult, Error, Field, IdentityId,
    ProductRole, Report, Scalar, StructureBundle, StructureKind, ValidateOptions, Vector,
};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::report::{
    boolean_entry, report_entries, verdict_entry, CheckEntry, Coords, Outcome, Provenance, ReportFile, WitnessEntry,
};
use crate::spec::{parse_scalar, Bindings, Resolved, SpecFile};
use crate::CliError;

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Context {
    /// Arguments after the program name, recorded in the report.
    pub argv: Vec<String>,
    pub field: Option<Field>,
    pub seed: Option<u64>,
}

#[derive(Default)]
struct Body {
    checks: Vec<CheckEntry>,
    flags: Vec<String>,
    analysis: Option<Json>,
    output: Option<SpecFile>,
    seed: Option<u64>,
}

struct Session<'a> {
    ctx: &'a Context,
    digests: Vec<String>,
}

impl<'a> Session<'a> {
    fn new(ctx: &'a Context) -> Self {
        Session {
            ctx,
            digests: Vec::new(),
        }
    }

    fn load(&mut self, path: &Path) -> Result<Resolved, CliError> {
        let bytes = fs::read(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.digests.push(format!("sha256:{:x}", Sha256::digest(&bytes)));
        let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
        SpecFile::from_json(&text)?.resolve(self.ctx.field)
    }

    fn finish(self, body: Result<Body, CliError>) -> ReportFile {
        let mut provenance = Provenance {
            command: self.ctx.argv.clone(),
            input_digest: (!self.digests.is_empty()).then(|| self.digests.join(",")),
            seed: None,
        };
        match body {
            Ok(b) => {
                provenance.seed = b.seed;
                let verdict = if b.checks.iter().all(|c| c.holds) {
                    Outcome::Pass
                } else {
                    Outcome::Fail
                };
                ReportFile {
                    verdict,
                    error: None,
                    flags: b.flags,
                    checks: b.checks,
                    analysis: b.analysis,
                    construction_output: b.output,
                    provenance,
                }
            }
            Err(e) => {
                let (error, checks) = match e {
                    CliError::Core(Error::Precondition {
                        construction,
                        condition,
                        report,
                    }) => (
                        format!("{construction}: precondition failed: {condition}"),
                        report.map(|r| report_entries(&r)).unwrap_or_default(),
                    ),
                    other => (other.to_string(), Vec::new()),
                };
                ReportFile {
                    verdict: Outcome::Error,
                    error: Some(error),
                    flags: Vec::new(),
                    checks,
                    analysis: None,
                    construction_output: None,
                    provenance,
                }
            }
        }
    }
}

fn default_subject(bundle: &StructureBundle) -> ProductRole {
    if bundle.star().is_some() {
        ProductRole::Star
    } else {
        ProductRole::Dot
    }
}

#[derive(Clone, Debug)]
pub struct CheckRequest {
    pub kind: Option<StructureKind>,
    pub identities: Vec<IdentityId>,
    pub bindings: Bindings,
    /// Random trials per identity, in addition to the exact basis check.
    pub sanity: Option<usize>,
    pub require_morphism: bool,
}

/// Validates a structure kind and/or single identities on a spec file.
pub fn check(ctx: &Context, file: &Path, req: &CheckRequest) -> ReportFile {
    let mut s = Session::new(ctx);
    let body = (|| {
        let bundle = s.load(file)?.bundle(&req.bindings)?;
        if req.kind.is_none() && req.identities.is_empty() {
            return Err(CliError::Input("nothing to check: give --kind or --identity".into()));
        }
        let mut report = Report::default();
        if let Some(kind) = req.kind {
            let opts = ValidateOptions {
                require_morphism: req.require_morphism,
            };
            report = validate_with_options(&bundle, kind, opts)?;
        }
        for &id in &req.identities {
            report.checks.push(CheckResult {
                name: CheckName::Identity(id),
                on: None,
                verdict: check_identity(&bundle, id)?,
            });
        }
        let mut body = Body {
            checks: report_entries(&report),
            ..Body::default()
        };
        if let Some(trials) = req.sanity {
            let seed = ctx.seed.unwrap_or(0);
            body.seed = Some(seed);
            let subject = default_subject(&bundle);
            let mut seen = BTreeSet::new();
            for c in &report.checks {
                let CheckName::Identity(id) = c.name else { continue };
                if c.on.is_some_and(|r| r != subject) || !seen.insert(id.name()) {
                    continue;
                }
                let v = random_sanity(&bundle, id, trials, seed)?;
                body.checks.push(verdict_entry(format!("sanity:{id}"), None, &v));
            }
        }
        Ok(body)
    })();
    s.finish(body)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    YauTwist,
    PowerTwist,
    CommutatorBracket,
    InvolutiveUntwist,
    AlphaInverseBracket,
    GdLambda,
    GdElement,
    PartialStar,
    DerivationNp,
    NpYauTwist,
    TensorProduct,
    TensorNp,
    UnityDerivation,
    TwistForm,
    QuadraticHomLie,
    QuadraticNovikovFromInvolutive,
    QuadraticPowerTwist,
}

impl Construction {
    pub const ALL: &'static [Construction] = &[
        Construction::YauTwist,
        Construction::PowerTwist,
        Construction::CommutatorBracket,
        Construction::InvolutiveUntwist,
        Construction::AlphaInverseBracket,
        Construction::GdLambda,
        Construction::GdElement,
        Construction::PartialStar,
        Construction::DerivationNp,
        Construction::NpYauTwist,
        Construction::TensorProduct,
        Construction::TensorNp,
        Construction::UnityDerivation,
        Construction::TwistForm,
        Construction::QuadraticHomLie,
        Construction::QuadraticNovikovFromInvolutive,
        Construction::QuadraticPowerTwist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::YauTwist => "yau-twist",
            Construction::PowerTwist => "power-twist",
            Construction::CommutatorBracket => "commutator-bracket",
            Construction::InvolutiveUntwist => "involutive-untwist",
            Construction::AlphaInverseBracket => "alpha-inverse-bracket",
            Construction::GdLambda => "gd-lambda",
            Construction::GdElement => "gd-element",
            Construction::PartialStar => "partial-star",
            Construction::DerivationNp => "derivation-np",
            Construction::NpYauTwist => "np-yau-twist",
            Construction::TensorProduct => "tensor-product",
            Construction::TensorNp => "tensor-np",
            Construction::UnityDerivation => "unity-derivation",
            Construction::TwistForm => "twist-form",
            Construction::QuadraticHomLie => "quadratic-homlie",
            Construction::QuadraticNovikovFromInvolutive => "quadratic-novikov-from-involutive",
            Construction::QuadraticPowerTwist => "quadratic-power-twist",
        }
    }
}

impl FromStr for Construction {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Construction::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Construction::ALL.iter().map(|c| c.name()).collect();
                CliError::Input(format!("unknown construction {s:?} (one of {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug)]
pub struct ConstructRequest {
    pub construction: Construction,
    pub bindings: Bindings,
    /// Second operand of tensor constructions.
    pub with: Option<std::path::PathBuf>,
    /// Exponent of power twists.
    pub n: Option<u32>,
    pub lambda: Option<String>,
    /// Comma-separated coordinates of the element used by `gd-element`.
    pub element: Option<String>,
    pub mode: Option<HomLieMode>,
}

fn need<'b, T>(v: Option<&'b T>, what: &str, name: Construction) -> Result<&'b T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("{} needs a {what}", name.name())))
}

fn tensor_basis(a: &Option<Vec<String>>, b: &Option<Vec<String>>) -> Option<Vec<String>> {
    let (a, b) = (a.as_ref()?, b.as_ref()?);
    Some(
        a.iter()
            .flat_map(|x| b.iter().map(move |y| format!("{x}⊗{y}")))
            .collect(),
    )
}

/// Applies a construction and returns its output as a spec file.
pub fn construct(ctx: &Context, file: &Path, req: &ConstructRequest) -> ReportFile {
    use Construction as C;
    let mut s = Session::new(ctx);
    let body = (|| {
        let r = s.load(file)?;
        let b = r.bundle(&req.bindings)?;
        let name = req.construction;
        let mut basis = r.basis.clone();
        let n = || {
            req.n
                .ok_or_else(|| CliError::Input(format!("{} needs --n", name.name())))
        };
        let alpha = || need(b.alpha(), "twist (map \"alpha\" or --alpha)", name);
        let del = || need(b.del(), "derivation (map \"del\" or --del)", name);
        let dot = || need(b.dot(), "dot product", name);
        let out: StructureBundle = match name {
            C::YauTwist => constructions::yau_twist(b.subject(), alpha()?)?,
            C::PowerTwist => constructions::power_twist(b.subject(), alpha()?, n()?)?,
            C::CommutatorBracket => constructions::commutator_bracket(b.subject(), b.alpha())?,
            C::InvolutiveUntwist => StructureBundle::from_star(constructions::involutive_untwist(&b)?),
            C::AlphaInverseBracket => StructureBundle::from_star(constructions::alpha_inverse_bracket(&b)?),
            C::GdLambda => {
                let lambda = match &req.lambda {
                    Some(l) => parse_scalar(r.field, l)?,
                    None => r.field.zero(),
                };
                StructureBundle::from_star(constructions::gd_lambda_product(dot()?, del()?, &lambda)?)
            }
            C::GdElement => {
                let text = req
                    .element
                    .as_ref()
                    .ok_or_else(|| CliError::Input("gd-element needs --element".into()))?;
                let coeffs = text
                    .split(',')
                    .map(|c| parse_scalar(r.field, c.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                let v = Vector::from_coeffs(r.field, coeffs)?;
                StructureBundle::from_star(constructions::gd_element_product(dot()?, del()?, &v)?)
            }
            C::PartialStar => constructions::partial_star_product(&b)?,
            C::DerivationNp => constructions::derivation_np_product(&b)?,
            C::NpYauTwist => {
                let a = alpha()?.clone();
                constructions::np_yau_twist(&b.clone().without_alpha(), &a)?
            }
            C::TensorProduct | C::TensorNp => {
                let path = req
                    .with
                    .as_ref()
                    .ok_or_else(|| CliError::Input(format!("{} needs --with FILE", name.name())))?;
                let r2 = s.load(path)?;
                let b2 = r2.bundle(&req.bindings)?;
                basis = tensor_basis(&r.basis, &r2.basis);
                if name == C::TensorNp {
                    constructions::tensor_np(&b, &b2)?
                } else {
                    StructureBundle::from_star(constructions::tensor_product(b.subject(), b2.subject()))
                }
            }
            C::UnityDerivation => {
                let d = constructions::unity_derivation(&b)?;
                b.clone().with_del(d)?
            }
            C::TwistForm => {
                let form = need(b.form(), "form", name)?;
                let twisted = quadratic::twist_form(form, alpha()?, n()?)?;
                b.clone().without_form().with_form(twisted)?
            }
            C::QuadraticHomLie => {
                let mode = req.mode.unwrap_or(HomLieMode::FromHomNovikov);
                quadratic::derive_quadratic_homlie(&b, mode)?
            }
            C::QuadraticNovikovFromInvolutive => quadratic::quadratic_novikov_from_involutive(&b)?,
            C::QuadraticPowerTwist => quadratic::quadratic_power_twist(&b, n()?)?,
        };
        Ok(Body {
            analysis: Some(json!({ "construction": name.name(), "dim": out.dim() })),
            output: Some(SpecFile::from_bundle(&out, basis)),
            ..Body::default()
        })
    })();
    s.finish(body)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Analysis {
    Center,
    Lcs,
    Nilpotency,
}

impl FromStr for Analysis {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "center" => Ok(Analysis::Center),
            "lcs" => Ok(Analysis::Lcs),
            "nilpotency" => Ok(Analysis::Nilpotency),
            _ => Err(CliError::Input(format!(
                "unknown analysis {s:?} (one of center, lcs, nilpotency)"
            ))),
        }
    }
}

fn subspace_json(s: &Subspace) -> Json {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(Coords::coords).collect::<Vec<_>>(),
    })
}

/// Center, lower central series, or the nilpotency consequences of a
/// quadratic Hom-Novikov structure.
///
/// `lcs` treats the subject product itself as the bracket.
pub fn analyze(ctx: &Context, file: &Path, what: Analysis, bindings: &Bindings) -> ReportFile {
    let mut s = Session::new(ctx);
    let body = (|| {
        let r = s.load(file)?;
        let b = r.bundle(bindings)?;
        let a = b.subject();
        let mut body = Body::default();
        match what {
            Analysis::Center => {
                body.analysis = Some(json!({ "center": subspace_json(&center(a)) }));
            }
            Analysis::Lcs => {
                let series = lower_central_series(a, a.dim() + 1);
                body.analysis = Some(json!({
                    "lcs_dims": series.iter().map(Subspace::dim).collect::<Vec<_>>(),
                    "lcs": series.iter().map(subspace_json).collect::<Vec<_>>(),
                }));
            }
            Analysis::Nilpotency => {
                let n = nilpotency_report(&b)?;
                body.checks = vec![
                    boolean_entry("derived-in-center", n.derived_in_center),
                    boolean_entry("two-step", n.two_step),
                ];
                if !(n.derived_in_center && n.two_step) {
                    body.flags.push("counterexample?".into());
                    if r.field.is_prime_field() {
                        body.flags.push(format!(
                            "finite characteristic {}: the statement is only claimed in characteristic 0",
                            r.field.characteristic()
                        ));
                    }
                }
                body.analysis = Some(json!({
                    "derived_in_center": n.derived_in_center,
                    "two_step": n.two_step,
                    "lcs_dims": n.lcs_dims,
                    "center": subspace_json(&n.center),
                    "derived": subspace_json(&n.derived),
                }));
            }
        }
        Ok(body)
    })();
    s.finish(body)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Endomorphisms,
    Automorphisms,
}

impl FromStr for Enumeration {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "endomorphisms" => Ok(Enumeration::Endomorphisms),
            "automorphisms" => Ok(Enumeration::Automorphisms),
            _ => Err(CliError::Input(format!(
                "unknown enumeration {s:?} (one of endomorphisms, automorphisms)"
            ))),
        }
    }
}

/// Lists every endomorphism or automorphism of the subject product over GF(p).
pub fn enumerate(ctx: &Context, file: &Path, what: Enumeration, bindings: &Bindings) -> ReportFile {
    let mut s = Session::new(ctx);
    let body = (|| {
        let b = s.load(file)?.bundle(bindings)?;
        let maps = match what {
            Enumeration::Endomorphisms => constructions::enumerate_endomorphisms(b.subject())?,
            Enumeration::Automorphisms => constructions::enumerate_automorphisms(b.subject())?,
        };
        let name = match what {
            Enumeration::Endomorphisms => "endomorphisms",
            Enumeration::Automorphisms => "automorphisms",
        };
        Ok(Body {
            analysis: Some(json!({
                "what": name,
                "count": maps.len(),
                "maps": maps.iter().map(|m| crate::spec::matrix_entries(m.matrix())).collect::<Vec<_>>(),
            })),
            ..Body::default()
        })
    })();
    s.finish(body)
}

#[derive(Clone, Debug, Default)]
pub struct DemoRequest {
    pub family: String,
    pub c: Option<String>,
    pub q: Option<i64>,
    pub s: Option<String>,
    pub beta: Option<String>,
    pub window: Option<Window>,
    pub suite: String,
}

enum Plan {
    Kind(StructureKind, FamilyRoles),
    Identity(IdentityId, FamilyRoles),
    Unity,
}

/// Named checks available to `demo`, per family.
pub const LAURENT_SUITES: &[&str] = &[
    "novikov-star1",
    "hom-novikov-star2",
    "hom-associative-bullet",
    "del-gd2",
    "del-derivation",
];
pub const INDEXED_SUITES: &[&str] = &["np", "hom-np", "del-derivation", "unity-derivation"];

fn plan(spec: &FamilySpec, suite: &str) -> Result<Plan, CliError> {
    use FamilyMap as M;
    use FamilyProduct as P;
    let roles = |dot, star, alpha, del| FamilyRoles { dot, star, alpha, del };
    let plan = match (spec, suite) {
        (FamilySpec::Laurent { .. }, "novikov-star1") => {
            Plan::Kind(StructureKind::Novikov, roles(None, Some(P::Star1), None, None))
        }
        (FamilySpec::Laurent { .. }, "hom-novikov-star2") => Plan::Kind(
            StructureKind::HomNovikov,
            roles(None, Some(P::Star2), Some(M::Alpha), None),
        ),
        (FamilySpec::Laurent { .. }, "hom-associative-bullet") => Plan::Kind(
            StructureKind::HomAssociativeCommutative,
            roles(Some(P::Bullet), None, Some(M::Alpha), None),
        ),
        (FamilySpec::Laurent { .. }, "del-gd2") => {
            Plan::Identity(IdentityId::Gd2, roles(Some(P::Dot), None, None, Some(M::Del)))
        }
        (FamilySpec::Laurent { .. }, "del-derivation") => {
            Plan::Identity(IdentityId::Derivation, roles(Some(P::Dot), None, None, Some(M::Del)))
        }
        (FamilySpec::Indexed { .. }, "np") => Plan::Kind(
            StructureKind::NovikovPoisson,
            roles(Some(P::Dot56), Some(P::Star), None, None),
        ),
        (FamilySpec::Indexed { .. }, "hom-np") => Plan::Kind(
            StructureKind::HomNovikovPoisson,
            roles(Some(P::Bullet), Some(P::Star2), Some(M::Alpha), None),
        ),
        (FamilySpec::Indexed { .. }, "del-derivation") => {
            Plan::Identity(IdentityId::Derivation, roles(Some(P::Dot56), None, None, Some(M::Del)))
        }
        (FamilySpec::Indexed { .. }, "unity-derivation") => Plan::Unity,
        _ => {
            let known = match spec {
                FamilySpec::Laurent { .. } => LAURENT_SUITES,
                FamilySpec::Indexed { .. } => INDEXED_SUITES,
            };
            return Err(CliError::Input(format!(
                "unknown suite {suite:?} for the {} family (one of {})",
                spec.name(),
                known.join(", ")
            )));
        }
    };
    Ok(plan)
}

/// Compares the unity derivation of the closed window quotient with the
/// family's own derivation, basis vector by basis vector.
fn unity_checks(spec: &FamilySpec, window: Window) -> Result<Vec<CheckEntry>, CliError> {
    let roles = FamilyRoles {
        dot: Some(FamilyProduct::Dot56),
        star: Some(FamilyProduct::Star),
        ..FamilyRoles::default()
    };
    let b = embed_window(spec, roles, window, true)?;
    if find_unity(b.dot().expect("embedded dot")).is_none() {
        return Err(CliError::Input(format!("the embedded window {window} has no unit")));
    }
    let d = constructions::unity_derivation(&b)?;
    let field = spec.field();
    let grades: Vec<i64> = (window.lo..=window.hi).collect();
    let to_sparse = |v: &Vector| {
        SparseElement::from_terms(
            field,
            v.coeffs()
                .iter()
                .zip(&grades)
                .map(|(c, &g)| (GradedIndex::t(g), c.clone())),
        )
    };
    let mut checks = Vec::new();
    for (j, &g) in grades.iter().enumerate() {
        let x = GradedIndex::t(g);
        let got = to_sparse(&d.matrix().column(j));
        let expected = family_map(spec, FamilyMap::Del, &SparseElement::basis(field, x))?;
        let holds = got == expected;
        checks.push(CheckEntry {
            identity: "unity-derivation".into(),
            on: Some(crate::report::graded_label(&x)),
            holds,
            witness: (!holds).then(|| WitnessEntry {
                tuple: vec![x.coords()],
                lhs: got.coords(),
                rhs: expected.coords(),
            }),
        });
    }
    Ok(checks)
}

/// Runs a named suite of one of the infinite-dimensional families on a window.
pub fn demo(ctx: &Context, req: &DemoRequest) -> ReportFile {
    let s = Session::new(ctx);
    let body = (|| {
        let field = ctx.field.unwrap_or(Field::Rational);
        let scalar = |v: &Option<String>, default: i64| match v {
            Some(t) => parse_scalar(field, t),
            None => Ok(Scalar::from_i64(field, default)),
        };
        let spec = match req.family.as_str() {
            "laurent" => FamilySpec::laurent(scalar(&req.c, 0)?),
            "indexed" => FamilySpec::indexed(req.q.unwrap_or(0), scalar(&req.s, 1)?, scalar(&req.beta, 1)?)?,
            other => {
                return Err(CliError::Input(format!(
                    "unknown family {other:?} (one of laurent, indexed)"
                )))
            }
        };
        let window = match req.window {
            Some(w) => w,
            None => Window::new(-3, 3)?,
        };
        let checks = match plan(&spec, &req.suite)? {
            Plan::Kind(kind, roles) => report_entries(&window_validate(&spec, kind, roles, window)?),
            Plan::Identity(id, roles) => {
                vec![verdict_entry(
                    id.to_string(),
                    None,
                    &window_verify(&spec, id, roles, window)?,
                )]
            }
            Plan::Unity => unity_checks(&spec, window)?,
        };
        Ok(Body {
            checks,
            analysis: Some(json!({
                "family": spec.name(),
                "suite": req.suite,
                "window": window.to_string(),
                "field": field.to_string(),
            })),
            ..Body::default()
        })
    })();
    s.finish(body)
}
