//! Structured pass/fail reports for verification pipelines.
//!
//! Every verifier emits one line per check, in a deterministic order fixed
//! by the verifier, so reports are diffable across runs. A report passes
//! only when every check passes.

use std::fmt;

/// One named check with an optional failure detail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub pass: bool,
    /// Short stable identifier, e.g. "jacobi" or "balanced (A_0)".
    pub name: String,
    /// Human-readable detail, usually empty on pass.
    pub detail: String,
}

/// Ordered list of checks, optionally grouped under an entry label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Entry label prefixed to each line; empty for single-object reports.
    pub entry: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn for_entry(entry: impl Into<String>) -> Self {
        Report { entry: entry.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check { pass: true, name: name.into(), detail: String::new() });
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check { pass: false, name: name.into(), detail: detail.into() });
    }

    /// Record a boolean outcome under one name.
    pub fn record(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, detail);
        }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }

    /// Append all checks of another report, keeping its entry prefix on
    /// each absorbed line when present.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.checks {
            if !other.entry.is_empty() {
                c.name = format!("{} {}", other.entry, c.name);
            }
            self.checks.push(c);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let prefix =
                if self.entry.is_empty() { String::new() } else { format!("{} ", self.entry) };
            if c.detail.is_empty() {
                writeln!(f, "{status} {prefix}{}", c.name)?;
            } else {
                writeln!(f, "{status} {prefix}{} {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
