//! Fixed-width satellite catalog parsing and the in-orbit / status-date filter.
//!
//! Column positions and the status vocabulary live in a TOML file so that a
//! catalog format revision only needs a new config. Columns are 1-based and
//! inclusive, as in the catalog's own column guide.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{CalendarDate, LifespanRecord, Precision, RecordStatus, Source};
use crate::{Error, Result};

/// Rejects may make up at most this share of data lines before the parse is
/// declared a column-spec mismatch.
pub const MAX_REJECT_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SatcatField {
    CatalogId,
    Name,
    Owner,
    LaunchDate,
    Status,
    StatusDate,
}

impl SatcatField {
    pub fn is_required(self) -> bool {
        matches!(self, Self::CatalogId | Self::LaunchDate | Self::Status)
    }

    fn label(self) -> &'static str {
        match self {
            Self::CatalogId => "catalog_id",
            Self::Name => "name",
            Self::Owner => "owner",
            Self::LaunchDate => "launch_date",
            Self::Status => "status",
            Self::StatusDate => "status_date",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub field: SatcatField,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusClass {
    InOrbit,
    Reentered,
    OtherEnded,
}

/// Raw status strings for each class. Anything not listed is [`StatusClass::OtherEnded`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusMapping {
    pub in_orbit: Vec<String>,
    pub reentered: Vec<String>,
}

impl StatusMapping {
    pub fn classify(&self, raw: &str) -> StatusClass {
        let raw = raw.trim();
        if self.in_orbit.iter().any(|s| s.eq_ignore_ascii_case(raw)) {
            StatusClass::InOrbit
        } else if self.reentered.iter().any(|s| s.eq_ignore_ascii_case(raw)) {
            StatusClass::Reentered
        } else {
            StatusClass::OtherEnded
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatcatColumnSpec {
    #[serde(default)]
    pub version: String,
    pub columns: Vec<ColumnRange>,
    pub status: StatusMapping,
}

impl SatcatColumnSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidColumnSpec(msg));
        let mut seen = HashSet::new();
        let mut previous_end = 0;
        for col in &self.columns {
            if col.start == 0 || col.end < col.start {
                return bad(format!(
                    "{} has invalid range {}-{}",
                    col.field.label(),
                    col.start,
                    col.end
                ));
            }
            if col.start <= previous_end {
                return bad(format!(
                    "{} overlaps or precedes the previous column",
                    col.field.label()
                ));
            }
            if !seen.insert(col.field) {
                return bad(format!("{} appears twice", col.field.label()));
            }
            previous_end = col.end;
        }
        for field in [SatcatField::CatalogId, SatcatField::LaunchDate, SatcatField::Status] {
            if !seen.contains(&field) {
                return bad(format!("required column {} is missing", field.label()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatcatRecord {
    pub catalog_id: String,
    pub name: Option<String>,
    pub owner: Option<String>,
    pub launch_date: CalendarDate,
    /// Kept verbatim for audit.
    pub current_status: String,
    pub status_class: StatusClass,
    pub date_of_status: Option<CalendarDate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SatcatParse {
    pub records: Vec<SatcatRecord>,
    pub rejects: Vec<Reject>,
    /// Non-blank, non-comment lines seen.
    pub data_lines: usize,
}

const MONTHS: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

/// Parses catalog dates such as `1957 Oct  4 1928:34`, `1957 Oct`, `1957`.
///
/// A trailing `?` (uncertain value) is ignored, the time of day is dropped,
/// and a blank field or `-` means no date. ISO `YYYY-MM-DD` is accepted too.
pub fn parse_satcat_date(text: &str) -> Result<Option<CalendarDate>> {
    let text = text.trim();
    if text.is_empty() || text == "-" {
        return Ok(None);
    }
    let bad = || Error::InvalidDate(text.to_string());
    let mut tokens = text.split_whitespace().map(|t| t.trim_end_matches('?'));
    let first = tokens.next().ok_or_else(bad)?;
    if first.contains('-') {
        return first.parse().map(Some);
    }
    let year: i32 = first.parse().map_err(|_| bad())?;
    let Some(month) = tokens.next().filter(|t| !t.is_empty()) else {
        return Ok(Some(CalendarDate::year_only(year)));
    };
    let month = MONTHS
        .iter()
        .position(|m| month.len() >= 3 && m.eq_ignore_ascii_case(&month[..3]))
        .ok_or_else(bad)? as u8
        + 1;
    match tokens.next().filter(|t| !t.is_empty()) {
        None => CalendarDate::year_month(year, month).map(Some),
        Some(day) => CalendarDate::ymd(year, month, day.parse().map_err(|_| bad())?).map(Some),
    }
}

fn slice_column(chars: &[char], col: &ColumnRange) -> Option<String> {
    let start = col.start - 1;
    if start >= chars.len() {
        return None;
    }
    let end = col.end.min(chars.len());
    let text: String = chars[start..end].iter().collect();
    let text = text.trim();
    (!text.is_empty()).then(|| text.to_string())
}

fn parse_line(line: &str, spec: &SatcatColumnSpec) -> std::result::Result<SatcatRecord, String> {
    let chars: Vec<char> = line.trim_end_matches(['\r', '\n']).chars().collect();
    let mut fields: BTreeMap<SatcatField, String> = BTreeMap::new();
    for col in &spec.columns {
        match slice_column(&chars, col) {
            Some(value) => {
                fields.insert(col.field, value);
            }
            None if col.field.is_required() => {
                return Err(format!("missing required field {}", col.field.label()));
            }
            None => {}
        }
    }
    let take = |f: SatcatField| fields.get(&f).cloned();
    let launch_text = take(SatcatField::LaunchDate).unwrap_or_default();
    let launch_date = parse_satcat_date(&launch_text)
        .map_err(|_| format!("unparseable launch date {launch_text:?}"))?
        .ok_or_else(|| "launch date is blank".to_string())?;
    let date_of_status = match take(SatcatField::StatusDate) {
        None => None,
        Some(text) => parse_satcat_date(&text).map_err(|_| format!("unparseable status date {text:?}"))?,
    };
    if let Some(status_date) = &date_of_status {
        if status_date.cmp_shared(&launch_date).is_lt() {
            return Err(format!("status date {status_date} precedes launch {launch_date}"));
        }
    }
    let current_status = take(SatcatField::Status).unwrap_or_default();
    Ok(SatcatRecord {
        catalog_id: take(SatcatField::CatalogId).unwrap_or_default(),
        name: take(SatcatField::Name),
        owner: take(SatcatField::Owner),
        launch_date,
        status_class: spec.status.classify(&current_status),
        current_status,
        date_of_status,
    })
}

/// Parses a fixed-width catalog. Blank lines and lines starting with `#` are skipped.
///
/// Lines that fail to parse are collected with their 1-based line numbers.
/// A line cut short inside optional columns still parses with those fields
/// absent. If more than [`MAX_REJECT_FRACTION`] of the data lines are
/// rejected the whole parse fails with [`Error::SpecMismatch`].
pub fn parse_satcat<R: BufRead>(reader: R, spec: &SatcatColumnSpec) -> Result<SatcatParse> {
    spec.validate()?;
    let mut out = SatcatParse::default();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        out.data_lines += 1;
        match parse_line(&line, spec) {
            Ok(record) => out.records.push(record),
            Err(reason) => out.rejects.push(Reject {
                line: index + 1,
                reason,
            }),
        }
    }
    if out.rejects.len() as f64 > MAX_REJECT_FRACTION * out.data_lines as f64 {
        return Err(Error::SpecMismatch {
            rejected: out.rejects.len(),
            lines: out.data_lines,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatusBreakdown {
    pub total: usize,
    pub in_orbit: usize,
    pub reentered: usize,
    pub other_ended: usize,
    pub kept: usize,
    pub excluded_in_orbit: usize,
    pub excluded_no_status_date: usize,
    /// In-orbit records that nonetheless carry a status date (still excluded).
    pub in_orbit_with_status_date: usize,
    pub in_orbit_fraction: f64,
    pub reentered_fraction: f64,
    pub kept_fraction: f64,
    pub by_raw_status: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SatelliteFilter {
    pub kept: Vec<LifespanRecord>,
    pub excluded: Vec<LifespanRecord>,
    pub stats: StatusBreakdown,
}

/// Drops satellites still in orbit or without a status date; the rest get a
/// whole-year lifespan from launch year to status year.
///
/// Excluded satellites are returned alongside the kept ones with their
/// exclusion reason as the record status.
pub fn filter_satellite_lifespans(records: &[SatcatRecord]) -> SatelliteFilter {
    let mut out = SatelliteFilter::default();
    let stats = &mut out.stats;
    for rec in records {
        stats.total += 1;
        *stats.by_raw_status.entry(rec.current_status.clone()).or_default() += 1;
        match rec.status_class {
            StatusClass::InOrbit => stats.in_orbit += 1,
            StatusClass::Reentered => stats.reentered += 1,
            StatusClass::OtherEnded => stats.other_ended += 1,
        }
        let launch = rec.launch_date.truncate(Precision::Year);
        let name = rec.name.clone().unwrap_or_else(|| rec.catalog_id.clone());
        let excluded = |status| LifespanRecord {
            id: rec.catalog_id.clone(),
            name: name.clone(),
            operator: rec.owner.clone(),
            launch,
            end: None,
            status,
            source: Source::Satcat,
        };
        match (rec.status_class, rec.date_of_status) {
            (StatusClass::InOrbit, date) => {
                stats.excluded_in_orbit += 1;
                stats.in_orbit_with_status_date += usize::from(date.is_some());
                out.excluded.push(excluded(RecordStatus::ExcludedInOrbit));
            }
            (_, None) => {
                stats.excluded_no_status_date += 1;
                out.excluded.push(excluded(RecordStatus::ExcludedNoStatusDate));
            }
            (_, Some(date)) => {
                stats.kept += 1;
                out.kept.push(LifespanRecord {
                    end: Some(date.truncate(Precision::Year)),
                    status: RecordStatus::Ended,
                    ..excluded(RecordStatus::Ended)
                });
            }
        }
    }
    if stats.total > 0 {
        let total = stats.total as f64;
        stats.in_orbit_fraction = stats.in_orbit as f64 / total;
        stats.reentered_fraction = stats.reentered as f64 / total;
        stats.kept_fraction = stats.kept as f64 / total;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"
version = "test"
columns = [
  { field = "catalog_id", start = 1, end = 8 },
  { field = "name", start = 9, end = 20 },
  { field = "launch_date", start = 21, end = 33 },
  { field = "status", start = 34, end = 37 },
  { field = "status_date", start = 38, end = 50 },
]
[status]
in_orbit = ["O", "AO"]
reentered = ["R", "D"]
"#;

    fn spec() -> SatcatColumnSpec {
        SatcatColumnSpec::from_toml_str(SPEC).unwrap()
    }

    fn line(id: &str, name: &str, launch: &str, status: &str, sdate: &str) -> String {
        format!("{id:<8}{name:<12}{launch:<13}{status:<4}{sdate}")
    }

    #[test]
    fn empty_input() {
        let parsed = parse_satcat("".as_bytes(), &spec()).unwrap();
        assert!(parsed.records.is_empty());
        assert!(parsed.rejects.is_empty());
    }

    #[test]
    fn three_line_fixture() {
        let text = [
            "# header".to_string(),
            line("S1", "ALPHA", "1957 Oct  4", "R", "1958 Jan  4"),
            line("S2", "BETA", "1965 Mar", "O", ""),
            line("S3", "GAMMA", "1970", "L", "1975"),
        ]
        .join("\n");
        let parsed = parse_satcat(text.as_bytes(), &spec()).unwrap();
        assert_eq!(parsed.data_lines, 3);
        let years: Vec<_> = parsed.records.iter().map(|r| r.launch_date.year()).collect();
        assert_eq!(years, [1957, 1965, 1970]);
        assert_eq!(parsed.records[0].launch_date.to_string(), "1957-10-04");
        assert_eq!(parsed.records[0].status_class, StatusClass::Reentered);
        assert_eq!(parsed.records[1].status_class, StatusClass::InOrbit);
        assert_eq!(parsed.records[1].date_of_status, None);
        assert_eq!(parsed.records[2].status_class, StatusClass::OtherEnded);
        assert_eq!(parsed.records[2].date_of_status, Some(CalendarDate::year_only(1975)));
    }

    #[test]
    fn truncated_lines() {
        // ends inside the optional status-date column
        let short_optional = line("S1", "ALPHA", "1960", "O", "");
        // ends before the required status column
        let short_required = "S2      BETA        1961".to_string();
        let text = [short_optional]
            .into_iter()
            .chain((0..10).map(|i| line(&format!("S{}", i + 10), "X", "1962", "R", "1963")))
            .chain([short_required])
            .collect::<Vec<_>>()
            .join("\n");
        let parsed = parse_satcat(text.as_bytes(), &spec()).unwrap();
        assert_eq!(parsed.records.len(), 11);
        assert_eq!(parsed.records[0].date_of_status, None);
        assert_eq!(parsed.rejects.len(), 1);
        assert_eq!(parsed.rejects[0].line, 12);
        assert!(parsed.rejects[0].reason.contains("status"));
    }

    #[test]
    fn too_many_rejects_is_spec_mismatch() {
        let text = [
            line("S1", "A", "1960", "R", "1961"),
            "garbage".to_string(),
            line("S3", "C", "1960", "R", "1961"),
        ]
        .join("\n");
        assert!(matches!(
            parse_satcat(text.as_bytes(), &spec()),
            Err(Error::SpecMismatch { rejected: 1, lines: 3 })
        ));
    }

    #[test]
    fn status_date_before_launch_rejected() {
        let mut lines: Vec<String> = (0..10)
            .map(|i| line(&format!("S{i}"), "A", "1960", "R", "1961"))
            .collect();
        lines.push(line("BAD", "B", "1970 Jan  2", "R", "1969"));
        let parsed = parse_satcat(lines.join("\n").as_bytes(), &spec()).unwrap();
        assert_eq!(parsed.rejects.len(), 1);
        assert!(parsed.rejects[0].reason.contains("precedes"));
    }

    #[test]
    fn spec_validation() {
        let overlapping = SPEC.replace("start = 9, end = 20", "start = 8, end = 20");
        assert!(matches!(
            SatcatColumnSpec::from_toml_str(&overlapping),
            Err(Error::InvalidColumnSpec(_))
        ));
        let no_status = SPEC.replace("{ field = \"status\", start = 34, end = 37 },", "");
        assert!(SatcatColumnSpec::from_toml_str(&no_status).is_err());
    }

    #[test]
    fn catalog_dates() {
        assert_eq!(
            parse_satcat_date("1957 Oct  4 1928:34").unwrap().unwrap().to_string(),
            "1957-10-04"
        );
        assert_eq!(
            parse_satcat_date("1960 Aug 19?").unwrap().unwrap().to_string(),
            "1960-08-19"
        );
        assert_eq!(parse_satcat_date("1968 Nov").unwrap().unwrap().to_string(), "1968-11");
        assert_eq!(parse_satcat_date("1975").unwrap().unwrap().to_string(), "1975");
        assert_eq!(
            parse_satcat_date("1999-02-07").unwrap().unwrap().to_string(),
            "1999-02-07"
        );
        assert_eq!(parse_satcat_date(" - ").unwrap(), None);
        assert!(parse_satcat_date("1957 Foo 4").is_err());
        assert!(parse_satcat_date("1957 Feb 30").is_err());
    }

    fn rec(id: &str, launch: &str, class: StatusClass, raw: &str, sdate: Option<&str>) -> SatcatRecord {
        SatcatRecord {
            catalog_id: id.into(),
            name: None,
            owner: None,
            launch_date: parse_satcat_date(launch).unwrap().unwrap(),
            current_status: raw.into(),
            status_class: class,
            date_of_status: sdate.map(|s| parse_satcat_date(s).unwrap().unwrap()),
        }
    }

    #[test]
    fn filter_examples() {
        let records = vec![
            rec("a", "1965", StatusClass::InOrbit, "O", None),
            rec("b", "1970 Mar  3", StatusClass::Reentered, "R", Some("1975 Jan  9")),
            rec("c", "1971", StatusClass::InOrbit, "O", Some("1980")),
            rec("d", "1972", StatusClass::OtherEnded, "L", None),
        ];
        let out = filter_satellite_lifespans(&records);
        assert_eq!(out.kept.len(), 1);
        assert_eq!(out.kept[0].lifespan(), Some(5.0));
        assert_eq!(out.kept[0].source, Source::Satcat);
        assert_eq!(out.stats.kept + out.excluded.len(), out.stats.total);
        assert_eq!(out.stats.excluded_in_orbit, 2);
        assert_eq!(out.stats.in_orbit_with_status_date, 1);
        assert_eq!(out.stats.excluded_no_status_date, 1);
        assert_eq!(out.stats.in_orbit_fraction, 0.5);
        assert_eq!(out.stats.reentered_fraction, 0.25);
        assert_eq!(out.stats.kept_fraction, 0.25);
        assert_eq!(out.stats.by_raw_status["O"], 2);
        assert!(out
            .excluded
            .iter()
            .all(|r| r.end.is_none() && r.status != RecordStatus::Ended));
    }
}
