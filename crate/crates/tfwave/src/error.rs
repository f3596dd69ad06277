use std::path::{Path, PathBuf};

use tfwave_core::Error as CoreError;

/// Everything the harness can fail with. [`HarnessError::exit_code`] maps
/// each variant to the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("calibration: {0}")]
    Calibration(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn format(path: &Path, message: impl Into<String>) -> Self {
        HarnessError::Format {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    /// `2` for configurations the numerics reject up front, `3` for
    /// failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Core(e) => match e {
                CoreError::InvalidGrid(_)
                | CoreError::InvalidExponent(_)
                | CoreError::UnsupportedExponent(_)
                | CoreError::ExponentMismatch(_)
                | CoreError::IncompatibleLattice(_)
                | CoreError::WindowNotCompactlySupported
                | CoreError::EmbeddingConditionFailed { .. }
                | CoreError::InvalidSymbolParams { .. }
                | CoreError::SpecKindMismatch
                | CoreError::InvalidConfig(_) => 2,
                _ => 3,
            },
            _ => 3,
        }
    }
}
