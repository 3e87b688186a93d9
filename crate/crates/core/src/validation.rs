use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One failed check. Validation never throws; it returns a list of these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub severity: Severity,
    pub detail: String,
}

impl Violation {
    pub fn error(check: &str, detail: impl Into<String>) -> Self {
        Self { check: check.to_string(), severity: Severity::Error, detail: detail.into() }
    }

    pub fn warning(check: &str, detail: impl Into<String>) -> Self {
        Self { check: check.to_string(), severity: Severity::Warning, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "[{tag}] {}: {}", self.check, self.detail)
    }
}

pub fn has_errors(items: &[Violation]) -> bool {
    items.iter().any(|v| v.severity == Severity::Error)
}
