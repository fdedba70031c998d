use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("data format error: {0}")]
    Format(String),
    #[error("numerical failure in {stage}: {message}")]
    NumericalFailure { stage: String, message: String },
    #[error("downdate left the matrix indefinite: eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    PsdViolation { eigenvalue: f64, tolerance: f64 },
    #[error("unsupported phi: {0}")]
    UnsupportedPhi(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::UnsupportedPhi(_) => 2,
            Error::Format(_) | Error::Io(_) => 3,
            Error::NumericalFailure { .. } | Error::PsdViolation { .. } => 4,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(stage: &str, message: impl Into<String>) -> Self {
        Error::NumericalFailure {
            stage: stage.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
