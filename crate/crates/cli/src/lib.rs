//! File formats and command implementations behind the `hornfit` binary.

pub mod commands;
pub mod formats;

use thiserror::Error;

/// Command-level errors, mapped to process exit codes: usage and input
/// problems exit with 2, numerical failures with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<hornfit::Error> for CliError {
    fn from(e: hornfit::Error) -> Self {
        match e {
            hornfit::Error::Numerical { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
