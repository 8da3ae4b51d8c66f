use std::io;

use thiserror::Error;

/// Everything that can stop a run, with the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or malformed config, or a config the library rejects.
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Capacity(String),
    /// A run that completed but did not certify.
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    /// Attaches the config location that produced a library error.
    pub fn at(path: &str, e: trading_prophet::Error) -> Self {
        match e {
            trading_prophet::Error::Capacity { .. } => CliError::Capacity(format!("{path}: {e}")),
            other => CliError::Config(format!("{path}: {other}")),
        }
    }
}

impl From<trading_prophet::Error> for CliError {
    fn from(e: trading_prophet::Error) -> Self {
        match e {
            trading_prophet::Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
