use thiserror::Error;

/// Errors produced by dataset ingestion, planning, and analysis operations.
#[derive(Error, Debug)]
pub enum Error {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("unparseable row {row}: {reason}")]
    BadRow { row: usize, reason: String },

    #[error("row {row}, column {column:?}: expected a numeric value, got {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("label column {0:?} not found")]
    LabelColumnNotFound(String),

    #[error("label has {count} distinct values ({values:?}); exactly 2 are required")]
    LabelCardinality { count: usize, values: Vec<String> },

    #[error("positive label {0:?} does not occur in the data")]
    PositiveLabelMissing(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset invalid: {0}")]
    InvalidDataset(String),

    #[error("operation requires both classes, found only class {0}")]
    SingleClass(u8),

    #[error("class {class} has {count} members; at least {folds} are required for {folds}-fold stratification")]
    ClassTooSmall {
        class: u8,
        count: usize,
        folds: usize,
    },

    #[error("invalid learner configuration: {0}")]
    InvalidLearnerSpec(String),

    #[error("prediction rows have width {got}, model was trained on width {expected}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("resampling failed: {0}")]
    Resample(String),

    #[error("feature selection failed: {0}")]
    FeatureSelection(String),

    #[error("every candidate failed: {0}")]
    AllCandidatesFailed(String),

    #[error("cross-validation fold ({repeat}, {fold}) failed for every learner: {reason}")]
    FoldFailed {
        repeat: usize,
        fold: usize,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
