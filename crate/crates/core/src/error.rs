use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the workbench operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("modulus mismatch: expected {expected}, got {actual}")]
    ModulusMismatch { expected: u64, actual: u64 },

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Precondition(_) => "precondition",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ModulusMismatch { .. } => "modulus_mismatch",
            Error::SingularDesign(_) => "singular_design",
            Error::EmptyDataset => "empty_dataset",
            Error::GuardExceeded(_) => "guard_exceeded",
            Error::Parse(_) => "parse",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
