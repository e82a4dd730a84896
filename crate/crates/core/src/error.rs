use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PersimError>;

#[derive(Debug, Error)]
pub enum PersimError {
    #[error("dimension mismatch in {context}: {left:?} vs {right:?}")]
    DimensionMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "image of {rows}x{cols} is too small: every scale needs at least {min_side} pixels \
         per side after resampling (minimum full-resolution size {min_rows}x{min_cols})"
    )]
    ImageTooSmall {
        rows: usize,
        cols: usize,
        min_side: usize,
        min_rows: usize,
        min_cols: usize,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path}: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("manifest {path} rejected:\n  {}", problems.join("\n  "))]
    Manifest { path: PathBuf, problems: Vec<String> },

    #[error("configuration error: {0}")]
    Config(String),
}

impl PersimError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PersimError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            PersimError::InvalidParameter(_)
            | PersimError::ImageTooSmall { .. }
            | PersimError::Config(_) => 1,
            PersimError::Io { .. }
            | PersimError::Decode { .. }
            | PersimError::Manifest { .. }
            | PersimError::DimensionMismatch { .. }
            | PersimError::Empty(_) => 2,
            PersimError::Degenerate(_) | PersimError::Numerical(_) => 3,
        }
    }
}
