use std::fmt;
use std::process::ExitCode;

use zonal_shepard::Error;

/// Failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter combinations (exit 2).
    Usage(String),
    /// Unreadable, unwritable or malformed data (exit 3).
    Data(String),
    /// Local solve failures and other numerical breakdowns (exit 4).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => CliError::Usage(e.to_string()),
            Error::SolveFailure { .. } | Error::NoNodesInRange => CliError::Numerical(e.to_string()),
            Error::InvalidInput(_) | Error::Parse { .. } | Error::ZeroReference { .. } | Error::Io(_) => {
                CliError::Data(e.to_string())
            }
        }
    }
}

pub fn io_error(context: impl fmt::Display, e: std::io::Error) -> CliError {
    CliError::Data(format!("{context}: {e}"))
}

pub type CliResult<T> = Result<T, CliError>;
