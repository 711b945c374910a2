use thiserror::Error;

/// Errors raised by the numerical kernels and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller broke a documented precondition (dimension mismatch,
    /// out-of-range index, unsupported probe, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Non-finite input or a numerical breakdown.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// An invalid model, detector or run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Amplitude reached the edge of the simulation grid.
    #[error("horizon error: {0}")]
    Horizon(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
