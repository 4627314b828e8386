use serde::Serialize;

/// Outcome of an axiom or law check. `violation` holds the first witness found.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            pass: true,
            checked: 0,
            violation: None,
        }
    }

    /// Record one checked instance.
    pub fn tick(&mut self) {
        self.checked += 1;
    }

    /// Record a failure; only the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.pass {
            self.pass = false;
            self.violation = Some(witness.into());
        }
    }

    /// Check a condition against a lazily built witness.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.tick();
        if !ok {
            self.fail(witness());
        }
    }

    /// Fold another report into this one.
    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        if !other.pass {
            self.fail(format!("{}: {}", other.name, other.violation.unwrap_or_default()));
        }
    }
}
