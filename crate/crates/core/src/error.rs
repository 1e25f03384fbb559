//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed record: {reason}")]
    MalformedRecord {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("duplicate author '{0}'")]
    DuplicateAuthor(String),

    #[error("duplicate tweet id '{tweet_id}' within author '{author_id}'")]
    DuplicateTweetId { author_id: String, tweet_id: String },

    #[error("truth file lists author '{0}' but no feed file exists")]
    MissingFeed(String),

    #[error("feed file for author '{0}' has no truth entry")]
    MissingTruthEntry(String),

    #[error("corpus kind mismatch: expected {expected}, found {found}")]
    WrongCorpusKind { expected: String, found: String },

    #[error("lexicon line {line}: {reason}")]
    LexiconParse { line: usize, reason: String },

    #[error("lexicon form '{form}' maps to both '{existing}' and '{conflicting}'")]
    LexiconConflict {
        form: String,
        existing: String,
        conflicting: String,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("paired samples differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("all paired differences are zero; signed-rank statistic undefined")]
    AllZeroDifferences,

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("sample too small: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("group '{group}' has fewer than 2 users ({count})")]
    InsufficientUsers { group: String, count: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(
        path: impl Into<String>,
        line: usize,
        reason: impl Into<String>,
    ) -> Self {
        Error::MalformedRecord {
            path: path.into(),
            line,
            reason: reason.into(),
        }
    }
}
