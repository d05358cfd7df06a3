//! Machine-readable reports.

use std::fmt;

use homnov_core::families::{GradedIndex, SparseElement};
use homnov_core::{CheckResult, Report, Scalar, Value, Vector, Verdict, Witness};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::spec::SpecFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub on: Option<String>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEntry {
    pub tuple: Vec<Json>,
    pub lhs: Json,
    pub rhs: Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub command: Vec<String>,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportFile {
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction_output: Option<SpecFile>,
    pub provenance: Provenance,
}

impl ReportFile {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// JSON rendering of witness coordinates.
pub trait Coords {
    fn coords(&self) -> Json;
}

impl Coords for usize {
    fn coords(&self) -> Json {
        json!(self)
    }
}

impl Coords for Scalar {
    fn coords(&self) -> Json {
        json!([self.to_string()])
    }
}

impl Coords for Vector {
    fn coords(&self) -> Json {
        Json::Array(self.coeffs().iter().map(|c| json!(c.to_string())).collect())
    }
}

pub fn graded_label(i: &GradedIndex) -> String {
    match i.parity {
        0 => format!("t^{}", i.grade),
        _ => format!("theta t^{}", i.grade),
    }
}

impl Coords for GradedIndex {
    fn coords(&self) -> Json {
        json!(graded_label(self))
    }
}

impl Coords for SparseElement {
    fn coords(&self) -> Json {
        Json::Array(
            self.terms()
                .map(|(i, c)| json!([graded_label(i), c.to_string()]))
                .collect(),
        )
    }
}

fn value_coords<E: Coords>(v: &Value<E>) -> Json {
    match v {
        Value::Element(e) => e.coords(),
        Value::Scalar(s) => s.coords(),
    }
}

pub fn witness_entry<I: Coords, E: Coords>(w: &Witness<I, E>) -> WitnessEntry {
    WitnessEntry {
        tuple: w.tuple.iter().map(Coords::coords).collect(),
        lhs: value_coords(&w.lhs),
        rhs: value_coords(&w.rhs),
    }
}

pub fn verdict_entry<I: Coords, E: Coords>(identity: String, on: Option<String>, v: &Verdict<I, E>) -> CheckEntry {
    CheckEntry {
        identity,
        on,
        holds: v.holds(),
        witness: v.witness().map(witness_entry),
    }
}

pub fn check_entry<I: Coords, E: Coords>(c: &CheckResult<I, E>) -> CheckEntry {
    verdict_entry(c.name.to_string(), c.on.map(|r| r.to_string()), &c.verdict)
}

pub fn report_entries<I: Coords, E: Coords>(r: &Report<I, E>) -> Vec<CheckEntry> {
    r.checks.iter().map(check_entry).collect()
}

/// A check that is a plain yes/no answer.
pub fn boolean_entry(identity: &str, holds: bool) -> CheckEntry {
    CheckEntry {
        identity: identity.to_string(),
        on: None,
        holds,
        witness: None,
    }
}

fn compact(v: &Json) -> String {
    serde_json::to_string(v).expect("json values serialize")
}

impl fmt::Display for ReportFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Error => "error",
        };
        writeln!(f, "verdict: {verdict}")?;
        if let Some(e) = &self.error {
            writeln!(f, "error: {e}")?;
        }
        for flag in &self.flags {
            writeln!(f, "flag: {flag}")?;
        }
        for c in &self.checks {
            let on = c.on.as_ref().map(|r| format!(" [{r}]")).unwrap_or_default();
            match &c.witness {
                None if c.holds => writeln!(f, "  ok    {}{on}", c.identity)?,
                None => writeln!(f, "  FAIL  {}{on}", c.identity)?,
                Some(w) => writeln!(
                    f,
                    "  FAIL  {}{on} at {}: lhs = {}, rhs = {}",
                    c.identity,
                    compact(&Json::Array(w.tuple.clone())),
                    compact(&w.lhs),
                    compact(&w.rhs)
                )?,
            }
        }
        if let Some(a) = &self.analysis {
            writeln!(f, "analysis: {}", compact(a))?;
        }
        if let Some(out) = &self.construction_output {
            write!(f, "output:\n{}", out.to_json())?;
        }
        Ok(())
    }
}
