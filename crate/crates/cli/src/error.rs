use thiserror::Error;

/// Failures surfaced to the command line. Usage errors exit with 1,
/// numerical or I/O failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn failed(msg: impl Into<String>) -> CliError {
    CliError::Failed(msg.into())
}

impl From<pbsi_core::Error> for CliError {
    fn from(e: pbsi_core::Error) -> Self {
        match e {
            pbsi_core::Error::Domain(_) | pbsi_core::Error::Usage(_) => usage(e.to_string()),
            pbsi_core::Error::Unresolved(_) => failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        failed(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        failed(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        failed(format!("json error: {e}"))
    }
}
