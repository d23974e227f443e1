use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("line {line}: {field}: {message}")]
    Parse {
        line: usize,
        field: &'static str,
        message: String,
    },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("duplicate pattern id {0}")]
    DuplicatePattern(u32),

    #[error("instance exceeds oracle bounds: {0}")]
    BoundsExceeded(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
