use std::path::PathBuf;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("degenerate gold standard")]
    DegenerateGold,

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("invalid fold count {k} for {docs} documents")]
    FoldCount { k: usize, docs: usize },

    #[error("empty lexicon")]
    EmptyLexicon,

    #[error("mask length {mask} does not match document length {doc}")]
    MaskLength { mask: usize, doc: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {need} values, got {got}")]
    TooFewValues { need: usize, got: usize },

    #[error("zero variance")]
    ZeroVariance,

    #[error("degenerate variance")]
    DegenerateVariance,

    #[error("invalid synthetic spec: {0}")]
    Synthetic(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
