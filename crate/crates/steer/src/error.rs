use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SteerError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scene: {0}")]
    Semantic(String),
    #[error("grid cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Core(#[from] elastica_core::Error),
}

impl SteerError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SteerError::Io { path: path.into(), source }
    }

    pub(crate) fn parse(e: serde_json::Error) -> Self {
        let full = e.to_string();
        let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m).to_string();
        SteerError::Parse { line: e.line(), column: e.column(), message }
    }
}

pub type Result<T> = std::result::Result<T, SteerError>;
