use thiserror::Error;

/// Errors raised by constructions whose preconditions fail.
///
/// Mathematical *falsity* (a map that is not continuous, a space that is not
/// e.m.t.) is never an error; those are reported through booleans or verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmtError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid pseudometric: {0}")]
    InvalidMetric(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("{what} cap exceeded: needed {needed}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },

    /// Two independently computed routes disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl EmtError {
    pub fn parse(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        EmtError::Parse {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, EmtError::CapExceeded { .. })
    }
}

pub type Result<T, E = EmtError> = std::result::Result<T, E>;
