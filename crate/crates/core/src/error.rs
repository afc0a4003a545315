use std::path::PathBuf;

/// Errors raised by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O failure: {0}")]
    Write(#[from] std::io::Error),

    #[error("CSV is empty (no header row)")]
    EmptyCsv,

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),

    #[error("no feature columns")]
    NoFeatureColumns,

    #[error("no data rows")]
    NoRows,

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column `{column}`: cannot parse `{value}` as a finite number")]
    BadCell {
        line: usize,
        column: String,
        value: String,
    },

    #[error("line {line}: quoted fields are not supported")]
    QuotedField { line: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class `{class}` has {count} samples, needs at least {needed}")]
    ClassTooSmall {
        class: String,
        count: usize,
        needed: usize,
    },

    #[error("feature index {index} out of range for {n_features} features")]
    FeatureOutOfRange { index: usize, n_features: usize },

    #[error("feature subset is empty")]
    EmptySubset,

    #[error("duplicate feature index {0} in subset")]
    DuplicateFeature(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("training diverged at epoch {epoch} (non-finite loss)")]
    Diverged { epoch: usize },

    #[error("malformed report: {0}")]
    Report(String),
}

impl Error {
    /// True for errors caused by the input data rather than by a computation.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::EmptyCsv
                | Error::MissingLabelColumn(_)
                | Error::NoFeatureColumns
                | Error::NoRows
                | Error::RaggedRow { .. }
                | Error::BadCell { .. }
                | Error::QuotedField { .. }
                | Error::InvalidDataset(_)
                | Error::ClassTooSmall { .. }
                | Error::FeatureOutOfRange { .. }
                | Error::DuplicateFeature(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}
