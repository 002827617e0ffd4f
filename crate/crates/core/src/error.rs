use thiserror::Error;

/// Errors raised by curve construction, simulation, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input violates its documented domain.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Something went wrong while computing (non-finite values, bad logs).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
