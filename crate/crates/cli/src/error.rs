use std::path::Path;

use symrig_core::Error as CoreError;

/// Failure of a CLI run, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, malformed spec files, failed validation.
    #[error("{0}")]
    Validation(String),
    /// A depth, cell or work cap was hit, or a tolerance could not be reached.
    #[error("{0}")]
    Limit(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Limit(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DepthCapExceeded { .. }
            | CoreError::CellCapExceeded { .. }
            | CoreError::WorkCapExceeded { .. }
            | CoreError::NotConverged { .. }
            | CoreError::NoBracket { .. }
            | CoreError::NoMeshDecay { .. }
            | CoreError::ResolutionExhausted { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
