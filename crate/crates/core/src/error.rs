use thiserror::Error;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input value is out of range or not normalized.
    #[error("validation error: {0}")]
    Validation(String),
    /// An element or wiring refers to paths the state does not declare.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// A measurement was requested on a path whose photon occupancy is not exactly one.
    #[error("structural error: {0}")]
    Structural(String),
    /// The caller combined arguments in a way the operation does not support.
    #[error("usage error: {0}")]
    Usage(String),
    /// Least-squares fit could not be carried out.
    #[error("fit error: {0}")]
    Fit(String),
    /// A derived quantity has no meaningful value for the given input.
    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
