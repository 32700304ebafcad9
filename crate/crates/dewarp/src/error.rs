use std::path::{Path, PathBuf};

use dewarp_core::pipeline::{PipelineError, Stage};

/// Process exit codes, one per error class.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const BAD_ARGS: u8 = 2;
    /// Missing, unreadable or inconsistent input files.
    pub const MISSING_INPUT: u8 = 3;
    /// The mask has no usable document region or outline.
    pub const MASK_DEGENERATE: u8 = 4;
    pub const GRID_FAILURE: u8 = 5;
    /// A batch where some items succeeded and some failed.
    pub const PARTIAL: u8 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadArgs(String),
    #[error("missing input: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("invalid input {}: {reason}", path.display())]
    InvalidInput { path: PathBuf, reason: String },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot encode {}: {source}", path.display())]
    Encode { path: PathBuf, source: image::ImageError },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn invalid(path: &Path, reason: impl Into<String>) -> Self {
        CliError::InvalidInput {
            path: path.to_path_buf(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadArgs(_) => exit::BAD_ARGS,
            CliError::MissingInput(_) | CliError::InvalidInput { .. } => exit::MISSING_INPUT,
            CliError::Pipeline(e) => match e.stage {
                Stage::MaskRefinement | Stage::Contour => exit::MASK_DEGENERATE,
                Stage::Grid => exit::GRID_FAILURE,
                Stage::Remap => exit::INTERNAL,
            },
            CliError::Io { .. } | CliError::Encode { .. } | CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
