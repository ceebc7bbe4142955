use std::path::PathBuf;

use matchgate_core::Error as CoreError;

/// Exit status for validation failures, malformed input and IO errors.
pub const EXIT_VALIDATION: u8 = 1;
/// Exit status when a numerical check exceeds its tolerance.
pub const EXIT_TOLERANCE: u8 = 2;
/// Exit status when a resource cap (dense oracle size, degree) is hit.
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: line {line}, column {column}: {message}")]
    Parse { context: String, line: usize, column: usize, message: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("tolerance check failed: {0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Tolerance { .. }) | CliError::Tolerance(_) => EXIT_TOLERANCE,
            CliError::Core(CoreError::Resource { .. } | CoreError::DegreeTooHigh { .. }) => EXIT_RESOURCE,
            _ => EXIT_VALIDATION,
        }
    }

    /// Attaches a file name to parse and validation errors.
    pub fn in_file(self, name: &str) -> CliError {
        match self {
            CliError::Parse { line, column, message, .. } => {
                CliError::Parse { context: name.to_owned(), line, column, message }
            }
            CliError::Invalid { message, .. } => CliError::Invalid { context: name.to_owned(), message },
            other => other,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
