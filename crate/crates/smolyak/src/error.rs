use thiserror::Error;

/// Errors of the experiment driver, split by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// The request is malformed or outside the supported envelope (exit 2).
    #[error("invalid specification: {0}")]
    Spec(String),
    /// A verification mode found a violated property (exit 3).
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] smolyak_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 3,
            CliError::Spec(_) | CliError::Core(_) | CliError::Json(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
