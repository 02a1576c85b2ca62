use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this representation of the skewness function.
    #[error("unsupported beta variant: {0}")]
    UnsupportedVariant(String),

    /// Adaptive quadrature ran out of panels before meeting its tolerance.
    #[error("quadrature did not converge after {panels} panels: value {value:e}, error estimate {abs_err:e}")]
    NotConverged {
        value: f64,
        abs_err: f64,
        panels: usize,
    },

    /// A configuration value is missing, malformed or below its minimum.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
