use std::path::PathBuf;

use nerkit_core::harness::HarnessError;
use nerkit_core::{CorpusError, MetricsError, Split, TaggerError};

use crate::model_file::ModelFileError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{}: neither train.txt nor test.txt found", .0.display())]
    MissingSplit(PathBuf),
    #[error("{}: no {split} split", path.display())]
    NoSuchSplit { path: PathBuf, split: Split },
    #[error("{0}")]
    Tagger(#[from] TaggerError),
    #[error("{0}")]
    Harness(#[from] HarnessError),
    #[error("{0}")]
    Metrics(#[from] MetricsError),
    #[error("{0}")]
    Model(#[from] ModelFileError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
