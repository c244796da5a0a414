use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config or an impossible combination. Exit status 2.
    #[error("usage: {0}")]
    Usage(String),
    /// A run stopped on an unrecoverable condition. Exit status 3.
    #[error("run {run} (seed {seed}, n = {n}) aborted: {source}")]
    Aborted {
        run: usize,
        seed: u64,
        n: usize,
        #[source]
        source: lmmaes::Error,
    },
    #[error(transparent)]
    Core(#[from] lmmaes::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Aborted { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
