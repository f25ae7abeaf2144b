//! Pass/fail records for properties verified over finite samples.

/// Outcome of one verified property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub scope: String,
    pub counterexample: Option<String>,
}

pub(crate) struct Tally {
    name: &'static str,
    cases: usize,
    scope: String,
    counterexample: Option<String>,
}

impl Tally {
    pub(crate) fn new(name: &'static str, scope: impl Into<String>) -> Self {
        Tally {
            name,
            cases: 0,
            scope: scope.into(),
            counterexample: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    pub(crate) fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.counterexample.is_none(),
            cases: self.cases,
            scope: self.scope,
            counterexample: self.counterexample,
        }
    }
}
