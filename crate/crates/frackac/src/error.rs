//! Crate-wide error type.

/// Error raised by any solver, sampler, or I/O component.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iteration failed to converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// The caller violated a precondition (wrong dimension, point outside the
    /// domain, missing data, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A run configuration is malformed or internally inconsistent.
    #[error("config error: {0}")]
    Config(String),
    /// Too many simulated trajectories failed.
    #[error("trajectory error: {0}")]
    Trajectory(String),
    /// A post-processing fit or statistic could not be formed.
    #[error("analysis error: {0}")]
    Analysis(String),
    /// File system failure while writing outputs.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Numeric(_) => "E_NUMERIC",
            Error::Usage(_) => "E_USAGE",
            Error::Config(_) => "E_CONFIG",
            Error::Trajectory(_) => "E_TRAJECTORY",
            Error::Analysis(_) => "E_ANALYSIS",
            Error::Io(_) => "E_IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
