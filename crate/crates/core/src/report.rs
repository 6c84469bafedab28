//! Pass/fail reports with replayable counterexamples.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// Upper bound on stored failures per report; the total is still counted.
const MAX_STORED_FAILURES: usize = 25;

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub condition: String,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), cases: 0, failure_count: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Counts one case; on `ok == false` records a failure with the lazily built witness.
    pub fn check(&mut self, ok: bool, condition: &str, witness: impl FnOnce() -> Value) -> bool {
        self.cases += 1;
        if !ok {
            self.fail(condition, witness());
        }
        ok
    }

    pub fn fail(&mut self, condition: &str, witness: Value) {
        self.failure_count += 1;
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(Failure { condition: condition.to_string(), witness });
        }
    }

    /// Folds `other` into `self`, prefixing its conditions with its name.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_STORED_FAILURES {
                self.failures.push(Failure { condition: format!("{}: {}", other.name, f.condition), witness: f.witness });
            }
        }
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases, {} failures)", self.name, self.cases, self.failure_count)
    }
}
