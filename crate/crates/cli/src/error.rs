use std::fmt;

use qwalk_core::Error;

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit 2. `field` names the offending setting.
    Usage {
        field: &'static str,
        message: String,
    },
    /// Numerical trouble inside the library; exit 1.
    Numeric(String),
    /// A verification ran and did not pass; exit 1.
    Failed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(field: &'static str, message: impl fmt::Display) -> Self {
        CliError::Usage {
            field,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }

    /// Library errors that stem from user input become usage errors on `field`.
    pub fn from_core(field: &'static str, e: Error) -> Self {
        match e {
            Error::DegenerateSymbol { .. } | Error::Internal(_) => CliError::Numeric(e.to_string()),
            _ => CliError::usage(field, e),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage { field, message } => write!(f, "invalid {field}: {message}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
