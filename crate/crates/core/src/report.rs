use std::fmt;

use crate::identity::{CheckName, ProductRole, Verdict};
use crate::linalg::Vector;

/// One line of a validation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult<I = usize, E = Vector> {
    pub name: CheckName,
    /// The product a single-product identity was evaluated on.
    pub on: Option<ProductRole>,
    pub verdict: Verdict<I, E>,
}

/// Ordered list of checks; passes iff every check holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report<I = usize, E = Vector> {
    pub checks: Vec<CheckResult<I, E>>,
}

impl<I, E> Default for Report<I, E> {
    fn default() -> Self {
        Report { checks: Vec::new() }
    }
}

impl<I, E> Report<I, E> {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult<I, E>> {
        self.checks.iter().filter(|c| !c.verdict.holds())
    }

    pub fn first_failure(&self) -> Option<&CheckResult<I, E>> {
        self.failures().next()
    }

    pub fn find(&self, name: CheckName) -> Option<&CheckResult<I, E>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report<I, E>) {
        self.checks.extend(other.checks);
    }
}

impl<I: fmt::Debug, E: fmt::Display> fmt::Display for Report<I, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.checks.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            let on = c.on.map(|r| format!(" [{r}]")).unwrap_or_default();
            match c.verdict.witness() {
                None => write!(f, "  ok    {}{}", c.name, on)?,
                Some(w) => write!(
                    f,
                    "  FAIL  {}{} at {:?}: lhs = {}, rhs = {}",
                    c.name, on, w.tuple, w.lhs, w.rhs
                )?,
            }
        }
        Ok(())
    }
}
