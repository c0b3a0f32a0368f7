use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated (bad ranges, mismatched
    /// grids, malformed parameter vectors, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The inputs are structurally fine but lie outside the mathematical
    /// domain of the operation (zero impedance, zero data value, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical computation failed, e.g. a singular system at a
    /// resonance. Carries the offending frequency when one exists.
    #[error("numerical failure: {message}")]
    Numerical {
        frequency_hz: Option<f64>,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical_at(frequency_hz: f64, msg: impl Into<String>) -> Self {
        Error::Numerical {
            frequency_hz: Some(frequency_hz),
            message: format!("{} (at {} Hz)", msg.into(), frequency_hz),
        }
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical {
            frequency_hz: None,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
