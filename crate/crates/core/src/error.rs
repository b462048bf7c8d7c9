use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the interpolation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("local solve failed for neighborhood {neighborhood}: {detail}")]
    SolveFailure { neighborhood: usize, detail: String },

    #[error("no nodes in range of the evaluation point")]
    NoNodesInRange,

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("relative error undefined: reference vector has zero norm (rmse = {rmse})")]
    ZeroReference { rmse: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
