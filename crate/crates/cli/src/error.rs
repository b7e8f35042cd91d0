use std::fmt;
use std::process::ExitCode;

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag values (exit 1).
    Usage(String),
    /// Unreadable, unwritable or malformed data (exit 2).
    Data(String),
    /// `--paper-check` found a reference value the model does not reproduce (exit 3).
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Mismatch(_) => 3,
        })
    }

    pub fn usage(err: impl fmt::Display) -> Self {
        CliError::Usage(err.to_string())
    }

    pub fn data(err: impl fmt::Display) -> Self {
        CliError::Data(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "error: {msg}"),
            CliError::Mismatch(msg) => write!(f, "reference check failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;
