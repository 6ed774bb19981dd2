//! Pass/fail reports for verification suites.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::NotApplicable => "N/A",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    pub name: String,
    pub outcome: Outcome,
    /// Empty on a plain pass; witness data on failure.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub title: String,
    pub passed: bool,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            passed: true,
            clauses: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, outcome: Outcome, detail: impl Into<String>) {
        if outcome == Outcome::Fail {
            self.passed = false;
        }
        self.clauses.push(Clause {
            name: name.into(),
            outcome,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, Outcome::Pass, "");
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Outcome::Fail, detail);
    }

    pub fn not_applicable(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Outcome::NotApplicable, reason);
    }

    /// Records a pass, or a failure with the lazily built detail.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, detail());
        }
    }

    /// Records the outcome of a fallible check.
    pub fn record(&mut self, name: impl Into<String>, result: Result<(), String>) {
        match result {
            Ok(()) => self.pass(name),
            Err(e) => self.fail(name, e),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    /// Appends another report's clauses, prefixing their names.
    pub fn absorb(&mut self, other: Report) {
        for c in other.clauses {
            self.push(format!("{}: {}", other.title, c.name), c.outcome, c.detail);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.title, if self.passed { "PASS" } else { "FAIL" })?;
        for c in &self.clauses {
            write!(f, "  {:<4} {}", c.outcome.to_string(), c.name)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
