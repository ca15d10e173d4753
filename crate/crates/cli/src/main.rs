//! `spacelife`: ingest lifespan data, fit trend laws, forecast, and simulate
//! launch-date censoring.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse or usage, 3 insufficient data,
//! 4 model does not grow.

mod commands;
mod error;
mod input;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{BiasArgs, CompareArgs, FitArgs, ForecastArgs, IngestArgs};

#[derive(Debug, Parser)]
#[command(
    name = "spacelife",
    version,
    about = "Moore and Wright trend fits for spacecraft lifespans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a mission list or satellite catalog into normalized records.
    Ingest(IngestArgs),
    /// Fit Moore and/or Wright laws.
    Fit(FitArgs),
    /// Fit both laws to one series and compare RMS errors.
    Compare(CompareArgs),
    /// When a fitted law reaches a target lifespan.
    Forecast(ForecastArgs),
    /// Monte Carlo comparison of launch-year and end-date binning.
    SimulateBias(BiasArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ingest(args) => commands::ingest(args),
        Command::Fit(args) => commands::fit(args),
        Command::Compare(args) => commands::compare(args),
        Command::Forecast(args) => commands::forecast(args),
        Command::SimulateBias(args) => commands::simulate_bias(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code)
        }
    }
}
