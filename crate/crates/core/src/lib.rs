//! Trend fitting for spacecraft and satellite lifespans.
//!
//! Lifespans are attributed to the date a craft stopped operating, then fitted
//! with an exponential-in-time law (Moore) and a power-in-cumulative-volume law
//! (Wright). The crate also parses fixed-width satellite catalogs and mission
//! lists, aggregates satellite lifespans per year, and simulates how binning by
//! launch year biases trends when some craft are still running.

pub mod analysis;
pub mod bias_sim;
mod error;
pub mod fitting;
pub mod ingest;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    lifespan_years, to_decimal_year, AnnualAggregate, AnnualRow, CalendarDate, ComparisonReport, EndDatedSeries,
    LifespanRecord, MooreFit, Precision, RecordStatus, ResidualSpace, SeriesPoint, Source, VolumePoint, VolumeSeries,
    Winner, WrightFit,
};
