//! Verdict records shared by the verification suites.

use serde::Serialize;

/// How a universally quantified statement was exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// One named check and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub cases: u64,
    pub failures: u64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, mode: Mode) -> Check {
        Check {
            name: name.into(),
            pass: true,
            cases: 0,
            failures: 0,
            mode,
            seed: None,
            detail: None,
        }
    }

    pub fn exhaustive(name: impl Into<String>) -> Check {
        Check::new(name, Mode::Exhaustive)
    }

    pub fn sampled(name: impl Into<String>, seed: u64) -> Check {
        Check { seed: Some(seed), ..Check::new(name, Mode::Sampled) }
    }

    /// A single yes/no fact.
    pub fn fact(name: impl Into<String>, ok: bool) -> Check {
        let mut c = Check::exhaustive(name);
        c.record(ok);
        c
    }

    /// Records one case; the first failure's description is kept.
    pub fn record(&mut self, ok: bool) -> bool {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.pass = false;
        }
        ok
    }

    pub fn record_with(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        if !self.record(ok) && self.detail.is_none() {
            self.detail = Some(describe());
        }
        ok
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }

    /// Attaches `detail` unless a failure description is already present.
    pub fn with_detail_if_pass(mut self, detail: impl Into<String>) -> Check {
        if self.detail.is_none() {
            self.detail = Some(detail.into());
        }
        self
    }

    pub fn fail(&mut self, detail: impl Into<String>) {
        self.pass = false;
        self.failures += 1;
        if self.detail.is_none() {
            self.detail = Some(detail.into());
        }
    }
}

/// An ordered list of checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
