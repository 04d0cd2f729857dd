use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}line {line}: {message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid token {0:?}")]
    InvalidToken(String),

    #[error("sense rank must be at least 1")]
    InvalidSense,

    #[error("dataset for {expected:?} cannot hold an instance of {found:?}")]
    MixedWords { expected: String, found: String },

    #[error("empty training set")]
    EmptyTraining,

    #[error("cannot split {size} instances into {folds} folds")]
    Folds { size: usize, folds: usize },

    #[error("k = {k} is outside 1..={size}")]
    KOutOfRange { k: usize, size: usize },

    #[error("invalid k grid: {0}")]
    Grid(String),

    #[error("feature index {0} out of range")]
    FeatureIndex(usize),

    #[error("model dump: {0}")]
    Dump(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
