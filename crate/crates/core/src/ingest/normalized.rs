//! The normalized record CSV written by `ingest` and read back by the fitting commands.

use std::io::{Read, Write};

use crate::model::{LifespanRecord, RecordStatus, Source};
use crate::{Error, Result};

use super::Reject;

pub const NORMALIZED_COLUMNS: [&str; 8] = [
    "id",
    "name",
    "operator",
    "launch",
    "end",
    "status",
    "lifespan_years",
    "end_decimal_year",
];

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(writer: W, records: &[LifespanRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(NORMALIZED_COLUMNS)?;
    for r in records {
        out.write_record([
            r.id.clone(),
            r.name.clone(),
            r.operator.clone().unwrap_or_default(),
            r.launch.to_string(),
            r.end.map(|d| d.to_string()).unwrap_or_default(),
            r.status.as_str().to_string(),
            opt_num(r.lifespan()),
            opt_num(r.end_decimal_year()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a normalized CSV. Lifespans and decimal years are recomputed from the
/// dates; the stored columns are informational.
pub fn read_records_csv<R: Read>(reader: R, source: Source) -> Result<Vec<LifespanRecord>> {
    let mut input = csv::Reader::from_reader(reader);
    let headers = input.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != NORMALIZED_COLUMNS {
        return Err(Error::MalformedRow {
            row: 1,
            reason: format!("expected header {}", NORMALIZED_COLUMNS.join(",")),
        });
    }
    let mut records = Vec::new();
    for row in input.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let malformed = |e: Error| Error::MalformedRow {
            row: line,
            reason: e.to_string(),
        };
        let end = match &row[4] {
            "" => None,
            s => Some(s.parse().map_err(malformed)?),
        };
        let status: RecordStatus = row[5].parse().map_err(malformed)?;
        records.push(
            LifespanRecord::new(
                &row[0],
                &row[1],
                Some(row[2].to_string()).filter(|s| !s.is_empty()),
                row[3].parse().map_err(malformed)?,
                end,
                status,
                source,
            )
            .map_err(malformed)?,
        );
    }
    Ok(records)
}

pub fn write_rejects_csv<W: Write>(writer: W, rejects: &[Reject]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["line", "reason"])?;
    for r in rejects {
        out.write_record([r.line.to_string(), r.reason.clone()])?;
    }
    out.flush()?;
    Ok(())
}
