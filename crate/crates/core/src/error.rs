use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate vector: cosine is undefined for an all-zero vector")]
    DegenerateVector,

    #[error("text too short: {symbols} symbols cannot form a block of size {n}")]
    TextTooShort { symbols: usize, n: usize },

    #[error("wrong block length: expected {expected}, got {actual}")]
    BlockLength { expected: usize, actual: usize },

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("language {0:?} is not in the model")]
    UnknownLanguage(String),

    #[error("duplicate language {0:?}")]
    DuplicateLanguage(String),

    #[error("language {language:?}: no sample produced a text vector ({skipped} skipped)")]
    NoValidSamples { language: String, skipped: usize },

    #[error("a model needs at least two languages, got {0}")]
    TooFewLanguages(usize),

    #[error("corpus languages missing from the model: {}", .0.join(", "))]
    LanguageMismatch(Vec<String>),

    #[error("no valid samples in {0}")]
    EmptyCorpus(String),

    #[error("training and test corpora are the same source: {0}")]
    OverlappingCorpora(PathBuf),

    #[error("bad magic bytes, not a model file")]
    BadMagic,

    #[error("unsupported model file version {0}")]
    UnsupportedVersion(u16),

    #[error("checksum mismatch: file is truncated or corrupted")]
    Checksum,

    #[error("malformed model file: {0}")]
    Malformed(String),

    #[error("model invariant violated: {invariant}: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
