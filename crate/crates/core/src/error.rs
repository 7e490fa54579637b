use thiserror::Error;

/// Which half of completeness failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessCondition {
    UnitalKernel,
    HereditaryRange,
}

impl std::fmt::Display for CompletenessCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompletenessCondition::UnitalKernel => f.write_str("unital kernel"),
            CompletenessCondition::HereditaryRange => f.write_str("hereditary range"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or mismatched input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("system is not complete: {}", .failed.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
    NotComplete { failed: Vec<CompletenessCondition> },

    /// A point outside the domain of a partial map.
    #[error("outside domain: {0}")]
    Domain(String),

    /// An identity that must hold for every system failed; indicates a bug.
    #[error("contract breach: {0}")]
    ContractBreach(String),

    #[error("{what} exceeds limit {limit}")]
    Limit { what: String, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn breach(msg: impl Into<String>) -> Error {
    Error::ContractBreach(msg.into())
}
