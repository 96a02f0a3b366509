use std::path::PathBuf;

use thiserror::Error;

use crate::series::{Frequency, Period};

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,

    #[error("no observations inside {start}..={end}")]
    EmptyWindow { start: Period, end: Period },

    #[error("splice ranges overlap at {0}")]
    SpliceOverlap(Period),

    #[error("frequency mismatch: expected {expected}, found {found}")]
    FrequencyMismatch { expected: Frequency, found: Frequency },

    #[error("series share no periods")]
    NoOverlap,

    #[error("invalid series `{label}`: {reason}")]
    InvalidSeries { label: String, reason: String },

    #[error("invalid date range: {0}")]
    InvalidRange(String),

    #[error("{path}: missing column `{column}`")]
    Schema { path: PathBuf, column: String },

    #[error("{path}: row {row}: {message}")]
    Parse { path: PathBuf, row: usize, message: String },

    #[error("{path}: cannot tell whether rates are percent or fractions ({above} values above 1, {below} below 1)")]
    UnitAmbiguity { path: PathBuf, above: usize, below: usize },

    #[error("division by zero at {0}")]
    DivisionByZero(Period),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate regressor: all log u values are equal")]
    SingularFit,

    #[error("infeasible partition: {n} observations cannot hold {segments} segments of at least {min_seg}")]
    InfeasiblePartition { n: usize, segments: usize, min_seg: usize },

    #[error("integration left (0, 1) at t = {t}: u = {u}")]
    Integration { t: f64, u: f64 },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by missing or malformed input data.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::EmptySeries
                | Error::EmptyWindow { .. }
                | Error::SpliceOverlap(_)
                | Error::FrequencyMismatch { .. }
                | Error::NoOverlap
                | Error::InvalidSeries { .. }
                | Error::Schema { .. }
                | Error::Parse { .. }
                | Error::UnitAmbiguity { .. }
                | Error::DivisionByZero(_)
                | Error::Manifest(_)
                | Error::Io { .. }
                | Error::Csv { .. }
        )
    }

    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::SingularFit | Error::InfeasiblePartition { .. } | Error::Integration { .. }
        )
    }
}
