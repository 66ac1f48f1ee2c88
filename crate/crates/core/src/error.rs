use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: expected {expected} values, found {found}")]
    Arity { line: usize, expected: usize, found: usize },

    #[error("line {line}: value `{value}` is not declared for attribute `{attribute}`")]
    UndeclaredSymbol {
        line: usize,
        attribute: String,
        value: String,
    },

    #[error("line {line}: `{value}` is not a number (attribute `{attribute}`)")]
    NotNumeric {
        line: usize,
        attribute: String,
        value: String,
    },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("instance {index}: {message}")]
    Instance { index: usize, message: String },

    #[error("attribute `{0}` has no observed values")]
    EmptyColumn(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("instance {0} has no class value")]
    MissingClass(usize),

    #[error("unknown class label `{0}`")]
    UnknownLabel(String),

    #[error("unknown learner `{0}`")]
    UnknownLearner(String),

    #[error("unsupported model format version {0}")]
    Version(u32),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
