//! Loading records from a raw mission list, a raw catalog, or a normalized CSV.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use spacelife::ingest::{
    filter_by_operator, filter_satellite_lifespans, load_mission_csv, parse_satcat, read_records_csv, Reject,
    SatcatColumnSpec, StatusBreakdown, NORMALIZED_COLUMNS,
};
use spacelife::{LifespanRecord, Source};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// One row per spacecraft with day-precision dates.
    Mission,
    /// Fixed-width satellite catalog; analysed as annual means.
    Satcat,
}

impl Kind {
    pub fn source(self) -> Source {
        match self {
            Kind::Mission => Source::MissionList,
            Kind::Satcat => Source::Satcat,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Raw mission CSV, raw catalog, or a normalized CSV written by `ingest`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Kind::Mission)]
    pub kind: Kind,
    /// Column layout for a raw catalog (TOML).
    #[arg(long)]
    pub columns: Option<PathBuf>,
    /// Keep records whose operator contains this text (case-insensitive).
    #[arg(long)]
    pub operator: Option<String>,
}

pub struct Loaded {
    pub records: Vec<LifespanRecord>,
    pub rejects: Vec<Reject>,
    /// Catalog status accounting, for raw catalogs only.
    pub status: Option<StatusBreakdown>,
    pub empty_input: bool,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
}

pub fn load(args: &InputArgs) -> CliResult<Loaded> {
    let text = read(&args.input)?;
    let mut loaded = if text.trim().is_empty() {
        Loaded {
            records: Vec::new(),
            rejects: Vec::new(),
            status: None,
            empty_input: true,
        }
    } else if text.lines().next().map(str::trim) == Some(NORMALIZED_COLUMNS.join(",").as_str()) {
        Loaded {
            records: read_records_csv(text.as_bytes(), args.kind.source())?,
            rejects: Vec::new(),
            status: None,
            empty_input: false,
        }
    } else {
        match args.kind {
            Kind::Mission => Loaded {
                records: load_mission_csv(text.as_bytes())?,
                rejects: Vec::new(),
                status: None,
                empty_input: false,
            },
            Kind::Satcat => {
                let columns = args
                    .columns
                    .as_ref()
                    .ok_or_else(|| CliError::usage("a raw catalog needs --columns <layout.toml>"))?;
                let spec = SatcatColumnSpec::from_toml_str(&read(columns)?)?;
                let parsed = parse_satcat(text.as_bytes(), &spec)?;
                let filtered = filter_satellite_lifespans(&parsed.records);
                let mut records = filtered.kept;
                records.extend(filtered.excluded);
                Loaded {
                    records,
                    rejects: parsed.rejects,
                    status: Some(filtered.stats),
                    empty_input: false,
                }
            }
        }
    };
    if let Some(pattern) = &args.operator {
        loaded.records = filter_by_operator(&loaded.records, pattern);
    }
    Ok(loaded)
}
