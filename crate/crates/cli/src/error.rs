use thiserror::Error;

/// Failures surfaced by the command line, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    NoProgress(String),
    #[error("selftest failed: {0}")]
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Data(_) => 1,
            CliError::NoProgress(_) => 2,
            CliError::Selftest(_) => 3,
        }
    }
}

impl From<logsphere_core::Error> for CliError {
    fn from(e: logsphere_core::Error) -> Self {
        match e {
            logsphere_core::Error::NoProgress { .. } => CliError::NoProgress(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
