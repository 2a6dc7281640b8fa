use alloc::string::String;
use core::fmt;

/// A caller broke an operation's precondition (mismatched horizons, missing
/// predictions, empty inputs, out-of-range arguments).
#[derive(Debug, Clone, PartialEq)]
pub struct ContractViolation {
    pub message: String,
}

impl ContractViolation {
    pub(crate) fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl fmt::Display for ContractViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contract violation: {}", self.message)
    }
}

impl core::error::Error for ContractViolation {}

/// A scenario invariant that does not hold. `path` names the offending field
/// in scenario-file notation (for example `goals[1].id`), `rule` the violated
/// rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub path: String,
    pub rule: String,
}

impl ValidationError {
    pub(crate) fn new(path: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.rule)
    }
}

impl core::error::Error for ValidationError {}
