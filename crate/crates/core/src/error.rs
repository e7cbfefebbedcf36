use chrono::NaiveDate;
use thiserror::Error;

/// Errors produced by dataset ingestion, model fitting and prediction.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed record in a CSV input, with its 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Invalid scene or pipeline configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Invalid synthetic dataset description.
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    /// Operation called with input that violates its contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Segment with coincident endpoints where a direction is required.
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,

    /// Cluster whose member directions cancel out; no sweep axis exists.
    #[error("degenerate cluster direction: member vectors sum to zero")]
    DegenerateDirection,

    /// A day with no tracks cannot receive a day-level decision.
    #[error("day {0} has no tracks; no prediction possible")]
    EmptyDay(NaiveDate),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
