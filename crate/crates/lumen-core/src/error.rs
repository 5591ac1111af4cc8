use thiserror::Error;

/// Errors surfaced by corpus loading, model fitting, and prediction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown label name: {0}")]
    UnknownLabel(String),

    #[error("duplicate document id: {0}")]
    DuplicateId(String),

    #[error("label value out of {{0,1}}: {0}")]
    LabelOutOfRange(String),

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("unknown category name: {0}")]
    UnknownCategory(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("labels required: {0}")]
    LabelsRequired(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("feature count mismatch: expected {expected}, got {got}")]
    FeatureCountMismatch { expected: usize, got: usize },

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
