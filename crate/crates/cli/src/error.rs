use std::path::Path;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] optoarray_core::Error),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// 2 for validation problems, 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}
