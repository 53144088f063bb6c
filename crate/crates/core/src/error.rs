use thiserror::Error;

/// Errors produced by network construction, randomization, metrics, and IO.
#[derive(Debug, Error)]
pub enum Error {
    /// Flow record carries a negative weight. `index` is the 0-based record
    /// position; CSV readers report a 1-based `line` instead.
    #[error("record {index}: negative weight {weight}")]
    NegativeWeight { index: usize, weight: f64 },

    /// Timestamp field could not be parsed as a non-negative integer or an
    /// ISO-8601 date.
    #[error("record {index}: unparseable timestamp {value:?}")]
    InvalidTimestamp { index: usize, value: String },

    /// Integer and date timestamps cannot be mixed within one input.
    #[error("record {index}: timestamp {value:?} mixes integer and date kinds")]
    MixedTimestamps { index: usize, value: String },

    /// No records survive construction (e.g. the input held only self-loops).
    #[error("no records produce any network edge")]
    EmptyNetwork,

    /// Structural problem in a CSV input, with the 1-based line number.
    #[error("csv line {line}: {message}")]
    CsvFormat { line: u64, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Invalid configuration value or combination.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Timestamp shuffling is defined on unit-weight event networks only.
    #[error("timestamp shuffling requires unit weights; set drop_weights to discard them")]
    WeightedInput,
}

pub type Result<T> = std::result::Result<T, Error>;
