//! Machine-readable verification reports.

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The first entry at which two sides of an identity disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Check {
    /// Runs `f`, which returns the first failure if any, and times it.
    pub fn run(name: impl Into<String>, f: impl FnOnce() -> Option<Failure>) -> Check {
        let t = Instant::now();
        let failure = f();
        Check { name: name.into(), passed: failure.is_none(), failure, elapsed_ms: t.elapsed().as_secs_f64() * 1e3 }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, failure: impl FnOnce() -> Failure) -> Check {
        Check { name: name.into(), passed: ok, failure: if ok { None } else { Some(failure()) }, elapsed_ms: 0.0 }
    }
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), status: Status::Pass, checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        if !c.passed {
            self.status = Status::Fail;
        }
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn first_failure(&self) -> Option<(&str, &Failure)> {
        self.checks.iter().find_map(|c| c.failure.as_ref().map(|f| (c.name.as_str(), f)))
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("[{tag}] {} ({:.1} ms)\n", c.name, c.elapsed_ms));
            if let Some(f) = &c.failure {
                s.push_str(&format!("    at {}\n    lhs = {}\n    rhs = {}\n", f.location, f.lhs, f.rhs));
            }
        }
        let verdict = if self.passed() { "pass" } else { "fail" };
        let n_ok = self.checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{}: {verdict} ({n_ok}/{} checks)\n", self.name, self.checks.len()));
        s
    }
}
