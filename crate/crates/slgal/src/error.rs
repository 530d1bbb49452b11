use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("path geometry: {0}")]
    Geometry(String),
}

impl Error {
    /// Stable machine-readable discriminant for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidProblem(_) => "invalid_problem",
            Error::Config(_) => "config",
            Error::Pole(_) => "pole",
            Error::OutOfScope(_) => "out_of_scope",
            Error::Unsupported(_) => "unsupported",
            Error::Numeric(_) => "numeric",
            Error::Geometry(_) => "geometry",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
