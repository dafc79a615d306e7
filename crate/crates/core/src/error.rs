use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A relevance measure failed its construction invariants.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// Total mass is zero or non-finite, so the measure cannot be
    /// normalized or used as a relevance measure.
    #[error("unusable relevance measure: total mass {0} is not positive and finite")]
    UnusableMass(f64),

    /// The requested operation is not defined for this measure kind.
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),

    /// The operation requires a normalized measure (total mass 1).
    #[error("measure is not normalized: total mass {0}")]
    NotNormalized(f64),

    /// Sample construction or evaluation rejected the input values.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// Bin edges are inconsistent with the data they must cover.
    #[error("invalid bins: {0}")]
    InvalidBins(String),

    /// Prediction arrays are inconsistent.
    #[error("invalid predictions: {0}")]
    InvalidPredictions(String),

    /// Classification labels do not permit the requested statistic.
    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    /// A generator or experiment specification is out of range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Model training aborted.
    #[error("training failed: {0}")]
    Training(String),

    /// Feature dimension does not match the model input layer.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("serialization failed: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
