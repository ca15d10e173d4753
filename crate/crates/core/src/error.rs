use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid date {0:?}")]
    InvalidDate(String),
    #[error("end date {end} precedes launch date {launch}")]
    NegativeLifespan { launch: String, end: String },

    #[error("{rejected} of {lines} catalog lines rejected; the column spec probably does not match the file")]
    SpecMismatch { rejected: usize, lines: usize },
    #[error("invalid column spec: {0}")]
    InvalidColumnSpec(String),
    #[error("row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),

    #[error("need at least {needed} usable points, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("all abscissae are equal; slope is undetermined")]
    DegenerateAbscissa,
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("series is empty")]
    EmptySeries,
    #[error("exponent must be positive, got {0}")]
    NonpositiveExponent(f64),
    #[error("model does not grow (rate {0}); target is unreachable")]
    NoGrowth(f64),
    #[error("target lifespan must be positive and finite, got {0}")]
    InvalidTarget(f64),

    #[error("volume offset must be non-negative, got {0}")]
    NegativeOffset(i64),
    #[error("no rows left after applying the fit window")]
    EmptyAfterWindow,
    #[error("window start {start} is after window end {end}")]
    InvalidWindow { start: i32, end: i32 },
    #[error("model fit window {model:?} does not match series extent {series:?}")]
    MismatchedSeries { model: (f64, f64), series: (f64, f64) },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}
