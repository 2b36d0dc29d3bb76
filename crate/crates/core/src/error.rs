use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by this crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical routine failed to converge. Carries the offending matrix
    /// so callers can dump it for post-mortem analysis.
    #[error("numeric failure: {message}")]
    NumericFailure {
        message: String,
        matrix: Option<Array2<Complex64>>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
