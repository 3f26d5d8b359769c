use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by group arithmetic, (de)serialization, search budgets and
/// construction preconditions.
///
/// Verification failures are *not* errors: [`crate::model::RectSet::verify`]
/// returns a report. `Error::VerifyGate` only appears when an internal
/// constructor emits a set that fails its own post-build verification, which
/// indicates a bug rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    /// A group spec or document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An element's coordinate vector does not match the group's factor list.
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    /// An enumeration was requested on a set larger than the configured cap.
    #[error("enumeration cap exceeded: need {needed} elements, cap is {cap}")]
    CapExceeded { needed: u64, cap: u64 },

    /// A precondition on an operation's arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A bounded search ran out of budget before reaching a conclusion.
    #[error("search budget exhausted after {nodes} nodes{}", .hint.as_deref().map(|h| format!(" ({h})")).unwrap_or_default())]
    Budget { nodes: u64, hint: Option<String> },

    /// A constructor produced a set that failed post-build verification.
    #[error("internal construction failed verification: {0}")]
    VerifyGate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
