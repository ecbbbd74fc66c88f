use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    /// An error raised while turning input into library objects.
    pub fn input(e: emlattice::Error) -> Self {
        match e {
            emlattice::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Parse(format!("invalid input: {e}")),
        }
    }

    /// An error raised by a computation on valid input.
    pub fn compute(e: emlattice::Error) -> Self {
        match e {
            emlattice::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
