//! Pass/fail records shared by the verification sweeps.

use std::fmt;

use serde::Serialize;

/// One identity checked over a family of cases; keeps the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), cases: 0, witness: None }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: pass ({} cases)", self.name, self.cases),
            Some(w) => write!(f, "{}: FAIL ({} cases) {}", self.name, self.cases, w),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
