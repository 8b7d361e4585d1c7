//! Report entries shared by every checker.
//!
//! Reports are plain data: a list of named checks, each with a pass count and
//! the witnesses of every failure. Ordering is the order in which checks ran,
//! which is deterministic because every search iterates in ascending id order.

use serde::{Deserialize, Serialize};

/// A single violated instance, with the raw ids needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub witness: Vec<u32>,
    pub detail: String,
}

impl Violation {
    pub fn new(kind: &str, witness: Vec<u32>, detail: impl Into<String>) -> Self {
        Violation { kind: kind.to_string(), witness, detail: detail.into() }
    }
}

/// Outcome of a validation pass: empty iff nothing was violated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn kinds(&self) -> Vec<&str> {
        let mut k: Vec<&str> = self.violations.iter().map(|v| v.kind.as_str()).collect();
        k.dedup();
        k
    }
}

/// One named law or property, checked over `checked` instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<Violation>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), checked: 0, failures: Vec::new() }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, v: Violation) {
        self.checked += 1;
        self.failures.push(v);
    }

    /// Records one instance, passing iff `ok`.
    pub fn record(&mut self, ok: bool, kind: &str, witness: Vec<u32>, detail: impl FnOnce() -> String) {
        if ok {
            self.pass();
        } else {
            self.fail(Violation::new(kind, witness, detail()));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The machine-readable document emitted by the command-line front end.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, model: &str) -> Self {
        Report { command: command.to_string(), model: model.to_string(), ..Default::default() }
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }

    pub fn add(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} on {}\n", self.command, self.model);
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{status}] {} ({} checked, {} failed)\n", c.name, c.checked, c.failures.len()));
            for f in &c.failures {
                out.push_str(&format!("      {} {:?}: {}\n", f.kind, f.witness, f.detail));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&format!("failures: {}\n", self.failure_count()));
        out
    }
}
