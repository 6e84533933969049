use thiserror::Error;

use crate::metric::UndefinedReason;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only 2 and 4 are supported")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("direction is the origin")]
    Origin,
    #[error("metric undefined at this direction: {0}")]
    UndefinedMetric(UndefinedReason),
    #[error("input lies on the singular set: {0}")]
    SingularInput(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSymmetric => "not_symmetric",
            Error::Origin => "origin",
            Error::UndefinedMetric(_) => "undefined_metric",
            Error::SingularInput(_) => "singular_input",
            Error::Signature(_) => "signature",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
