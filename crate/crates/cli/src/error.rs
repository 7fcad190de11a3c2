use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sskh_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn input(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Input { path: path.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Input { .. } => "input",
            CliError::Usage(_) => "usage",
        };
        json!({ "error": { "kind": kind, "message": self.to_string() } })
    }
}

pub type CliResult<T> = Result<T, CliError>;
