use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Coarse classification used by front ends to map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Inconsistent or malformed parameters (exit code 1).
    Usage,
    /// The dataset or derived inputs failed validation (exit code 2).
    Data,
    /// Filesystem failure (exit code 3).
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed CSV in {path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("duplicate column name {name:?} in header")]
    DuplicateColumn { name: String },
    #[error("empty column name in header")]
    EmptyColumnName,
    #[error("row {row}, column {column:?}: {value:?} is not a finite number")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("duplicate case id {id:?}")]
    DuplicateCaseId { id: String },
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("dataset has no cases")]
    EmptyDataset,
    #[error("dataset has no columns")]
    NoColumns,
    #[error("id column {name:?} not found in header")]
    IdColumnNotFound { name: String },
    #[error("unknown variable {name:?}")]
    UnknownVariable { name: String },
    #[error("no threshold given for condition {name:?}")]
    MissingThreshold { name: String },
    #[error("threshold given for {name:?}, which is not a listed condition")]
    ExtraThreshold { name: String },
    #[error("outcome {name:?} is also listed among the conditions")]
    OutcomeAmongConditions { name: String },
    #[error("at least one condition is required")]
    NoConditions,
    #[error("too many conditions: {count} (the exact minimizer is capped at {max})")]
    TooManyConditions { count: usize, max: usize },
    #[error("consistency cutoff {value} is outside (0, 1]")]
    InclCutOutOfRange { value: f64 },
    #[error("frequency cutoff must be at least 1")]
    NCutZero,
    #[error("directional expectations require remainder inclusion")]
    DirExpRequiresRemainders,
    #[error("expected {expected} directional expectations, got {found}")]
    DirExpLengthMismatch { expected: usize, found: usize },
    #[error("on-set and don't-care set overlap at configuration {config}")]
    OverlappingSets { config: String },
    #[error("sweep variable {name:?} is not a listed condition")]
    SweepVarNotACondition { name: String },
    #[error("sweep axis {name:?} is not a listed condition")]
    UnknownAxis { name: String },
    #[error("no sweep axis given for condition {name:?} (use a singleton axis to fix its threshold)")]
    AxisMissingForCondition { name: String },
    #[error("duplicate sweep axis {name:?}")]
    DuplicateAxis { name: String },
    #[error("sweep axis {name:?} has no threshold values")]
    EmptyAxis { name: String },
    #[error("no sweep axes given")]
    EmptyAxes,
    #[error("sweep range is empty")]
    EmptySweepRange,
    #[error("a conservative term is contained in no parsimonious term (violated sandwich)")]
    SandwichViolated,
    #[error("nothing to chart: every summary row has no solution")]
    NothingToChart,
    #[error("model has no terms")]
    EmptyModel,
    #[error("no models given")]
    NoModels,
    #[error("malformed result file {path}: {message}")]
    ResultFile { path: PathBuf, message: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Io { .. } => ErrorKind::Io,
            DirExpRequiresRemainders
            | DirExpLengthMismatch { .. }
            | SweepVarNotACondition { .. }
            | UnknownAxis { .. }
            | AxisMissingForCondition { .. }
            | DuplicateAxis { .. }
            | EmptyAxis { .. }
            | EmptyAxes
            | EmptySweepRange => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
