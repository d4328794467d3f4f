use thiserror::Error;

/// Errors surfaced by the solver suite.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration or invalid arguments to an operation.
    #[error("config: {0}")]
    Config(String),

    /// A linear solve failed or produced an unacceptable residual.
    #[error("solver: {what} (residual {residual:e})")]
    Solver { what: String, residual: f64 },

    /// Numerical breakdown outside a linear solve (singular local system,
    /// indefinite projected matrix, spectral radius >= 1, ...).
    #[error("numerical: {0}")]
    Numerical(String),

    /// Malformed input file.
    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
