use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}: {msg}")]
    Config { origin: String, line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("bad --grid specification: {0}")]
    Grid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] thetaflow::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
