//! Mission-list CSV: `id,name,operator,launch_date,end_date,notes`.
//!
//! A blank end date marks a craft that is still operating.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use csv::StringRecord;

use crate::model::{CalendarDate, LifespanRecord, RecordStatus, Source};
use crate::{Error, Result};

const REQUIRED_COLUMNS: [&str; 5] = ["id", "name", "operator", "launch_date", "end_date"];

fn column_index(headers: &StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::MalformedRow {
            row: 1,
            reason: format!("header is missing column {name:?}"),
        })
}

pub fn load_mission_csv<R: Read>(reader: R) -> Result<Vec<LifespanRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = reader.headers()?.clone();
    let idx: Vec<usize> = REQUIRED_COLUMNS
        .iter()
        .map(|c| column_index(&headers, c))
        .collect::<Result<_>>()?;
    let (id_i, name_i, op_i, launch_i, end_i) = (idx[0], idx[1], idx[2], idx[3], idx[4]);

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let malformed = |reason: String| Error::MalformedRow { row: line, reason };
        let field = |i: usize| row.get(i).unwrap_or("");

        let id = field(id_i);
        if id.is_empty() {
            return Err(malformed("empty id".into()));
        }
        let launch: CalendarDate = field(launch_i)
            .parse()
            .map_err(|_| malformed(format!("bad launch date {:?}", field(launch_i))))?;
        let end: Option<CalendarDate> = match field(end_i) {
            "" => None,
            text => Some(text.parse().map_err(|_| malformed(format!("bad end date {text:?}")))?),
        };
        let operator = Some(field(op_i)).filter(|s| !s.is_empty()).map(str::to_string);
        let status = if end.is_some() {
            RecordStatus::Ended
        } else {
            RecordStatus::Operational
        };
        let record = LifespanRecord::new(id, field(name_i), operator, launch, end, status, Source::MissionList)
            .map_err(|e| malformed(e.to_string()))?;
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn load_mission_csv_path(path: impl AsRef<Path>) -> Result<Vec<LifespanRecord>> {
    load_mission_csv(File::open(path)?)
}

/// Records whose operator contains `pattern`, ignoring case. An empty pattern keeps everything.
pub fn filter_by_operator(records: &[LifespanRecord], pattern: &str) -> Vec<LifespanRecord> {
    let pattern = pattern.trim().to_lowercase();
    records
        .iter()
        .filter(|r| {
            pattern.is_empty()
                || r.operator
                    .as_deref()
                    .is_some_and(|op| op.to_lowercase().contains(&pattern))
        })
        .cloned()
        .collect()
}
