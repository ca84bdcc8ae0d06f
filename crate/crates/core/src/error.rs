use thiserror::Error;

/// Errors raised by the simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JcmError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("adaptive truncation undefined at infinite temperature")]
    AdaptiveAtInfiniteTemperature,

    #[error("adaptive truncation needs {required} terms, above the limit of {limit}")]
    TruncationTooLarge { required: u64, limit: u64 },

    #[error("time grid must be strictly increasing and non-negative (violated at index {index})")]
    NonMonotoneGrid { index: usize },

    #[error("{0} outside the open interval (-1, 0)")]
    ArcsineDomain(f64),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("Fock dimension {given} too small for the thermal tail; need at least {required}")]
    FockDimensionTooSmall { given: usize, required: usize },

    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, JcmError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> JcmError {
    JcmError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
