use smms_core::SmmsError;
use thiserror::Error;

/// Failures that stop a command before a report can be produced.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] SmmsError),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const UNMET: u8 = 1;
    pub const ERROR: u8 = 2;
}
