use thiserror::Error;

/// Errors raised by the engine. Decision outcomes ("no partial evaluation")
/// are values, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("depth mismatch: expected {expected}, found {found}")]
    DepthMismatch { expected: String, found: usize },

    #[error("atom {0} is not in the carrier")]
    CarrierMismatch(String),

    #[error("function is undefined at {0}")]
    PartialFunction(String),

    #[error("enumeration limit exceeded: {what} is {size}, limit {limit}")]
    EnumerationLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    #[error("witnesses are not composable: {0}")]
    NotComposable(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid dilation: {0}")]
    InvalidDilation(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("no filler found for a composable pair ({0}); the instance is not weakly cartesian or the filler code is wrong")]
    FillerNotFound(String),

    #[error("malformed value: {0}")]
    Malformed(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
