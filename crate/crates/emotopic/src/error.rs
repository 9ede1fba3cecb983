//! Crate-wide error type and the exit-code classes used by the CLI.

use std::path::PathBuf;

use crate::nlda::StageReport;

/// Everything that can go wrong across the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config: {0}")]
    Config(String),

    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("dataset: {0}")]
    Dataset(String),

    #[error("empty corpus: no document has any surviving token")]
    EmptyCorpus,

    #[error("corpus has no class labels")]
    UnlabeledCorpus,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("topic index {topic} out of range for {k} topics")]
    IndexOutOfRange { topic: usize, k: usize },

    #[error("degenerate topic {topic}: term '{term}' occurs in no document of the corpus")]
    DegenerateTopic { topic: usize, term: String },

    #[error("topic has an empty weight list")]
    EmptyTopic,

    #[error("pruning at stage {stage} removed every term")]
    EmptyPrune {
        stage: usize,
        reports: Vec<StageReport>,
    },

    #[error("stage {stage} retained {remaining} terms, fewer than {k} topics")]
    VocabularyCollapse {
        stage: usize,
        remaining: usize,
        k: usize,
    },

    #[error("negative entry {value} at ({row},{col}) in input matrix")]
    NegativeInput { row: usize, col: usize, value: f64 },

    #[error("rank {rank} exceeds min(docs, terms) = {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("class '{0}' has no rows in the training table")]
    MissingClass(String),

    #[error("training table contains a single class")]
    SingleClass,

    #[error("{rows} rows is fewer than {folds} folds")]
    TooFewRows { rows: usize, folds: usize },

    #[error("empty feature table")]
    EmptyTable,

    #[error("model file: {0}")]
    ModelFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes reported by the CLI, one exit code each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Config = 1,
    Io = 2,
    Model = 3,
    Data = 4,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn label(self) -> &'static str {
        match self {
            ExitClass::Config => "config",
            ExitClass::Io => "io",
            ExitClass::Model => "model",
            ExitClass::Data => "degenerate-data",
        }
    }
}

impl Error {
    /// Which exit class a failure belongs to.
    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Config(_) | Error::Dataset(_) | Error::InvalidParams(_) => ExitClass::Config,
            Error::Io { .. } => ExitClass::Io,
            Error::ModelFormat(_) | Error::IndexOutOfRange { .. } | Error::RankTooLarge { .. } => {
                ExitClass::Model
            }
            Error::EmptyCorpus
            | Error::UnlabeledCorpus
            | Error::DegenerateTopic { .. }
            | Error::EmptyTopic
            | Error::EmptyPrune { .. }
            | Error::VocabularyCollapse { .. }
            | Error::NegativeInput { .. }
            | Error::MissingClass(_)
            | Error::SingleClass
            | Error::TooFewRows { .. }
            | Error::EmptyTable => ExitClass::Data,
        }
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
