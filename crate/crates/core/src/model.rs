//! Domain types shared by the rest of the crate, plus date and lifespan arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Days per year used to turn day counts into years.
///
/// With this value 1/32 year comes out at 11.414 days.
pub const DAYS_PER_YEAR: f64 = 365.25;

/// Relative tolerance under which two RMS values count as a tie.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-9;
/// Absolute floor for ties, so two numerically-zero RMS values tie.
pub const TIE_ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Year,
    Month,
    Day,
}

/// A Gregorian date that may be known only to the month or the year.
///
/// Catalog and mission sources often give coarse dates ("1968-11" or just
/// "1965"); the precision is carried along rather than guessed away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CalendarDate {
    year: i32,
    month: Option<u8>,
    day: Option<u8>,
}

pub(crate) fn is_leap_year(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub(crate) fn days_in_year(year: i32) -> u32 {
    if is_leap_year(year) {
        366
    } else {
        365
    }
}

pub(crate) fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

/// Days since 1970-01-01 for a proleptic Gregorian date.
fn days_from_civil(year: i32, month: u8, day: u8) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let m = i64::from(month);
    let d = i64::from(day);
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let mp = (m + 9) % 12;
    let doy = (153 * mp + 2) / 5 + d - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

impl CalendarDate {
    pub fn year_only(year: i32) -> Self {
        Self {
            year,
            month: None,
            day: None,
        }
    }

    pub fn year_month(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidDate(format!("{year:04}-{month:02}")));
        }
        Ok(Self {
            year,
            month: Some(month),
            day: None,
        })
    }

    pub fn ymd(year: i32, month: u8, day: u8) -> Result<Self> {
        if !(1..=12).contains(&month) || day == 0 || day > days_in_month(year, month) {
            return Err(Error::InvalidDate(format!("{year:04}-{month:02}-{day:02}")));
        }
        Ok(Self {
            year,
            month: Some(month),
            day: Some(day),
        })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> Option<u8> {
        self.month
    }

    pub fn day(&self) -> Option<u8> {
        self.day
    }

    pub fn precision(&self) -> Precision {
        match (self.month, self.day) {
            (Some(_), Some(_)) => Precision::Day,
            (Some(_), None) => Precision::Month,
            _ => Precision::Year,
        }
    }

    /// Drops any components finer than `precision`.
    pub fn truncate(self, precision: Precision) -> Self {
        match precision {
            Precision::Year => Self::year_only(self.year),
            Precision::Month => Self { day: None, ..self },
            Precision::Day => self,
        }
    }

    /// Compares two dates using only the components both of them carry.
    pub fn cmp_shared(&self, other: &Self) -> Ordering {
        let shared = self.precision().min(other.precision());
        let a = self.truncate(shared);
        let b = other.truncate(shared);
        (a.year, a.month, a.day).cmp(&(b.year, b.month, b.day))
    }

    /// Month and day, filling an unknown day with the 15th. `None` for year-only dates.
    fn completed_month_day(&self) -> Option<(u8, u8)> {
        let month = self.month?;
        Some((month, self.day.unwrap_or(15)))
    }

    fn day_number(&self) -> Option<i64> {
        let (m, d) = self.completed_month_day()?;
        Some(days_from_civil(self.year, m, d))
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

fn unknown_part(part: &str) -> bool {
    !part.is_empty() && part.chars().all(|c| c == '?')
}

impl FromStr for CalendarDate {
    type Err = Error;

    /// Accepts `YYYY`, `YYYY-MM` and `YYYY-MM-DD`; a part written as `?` is unknown.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDate(s.to_string());
        let mut parts = s.trim().split('-');
        let year: i32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let month = parts.next();
        let day = parts.next();
        if parts.next().is_some() {
            return Err(bad());
        }
        match (month, day) {
            (None, None) => Ok(Self::year_only(year)),
            (Some(m), _) if unknown_part(m) => match day {
                None => Ok(Self::year_only(year)),
                Some(d) if unknown_part(d) => Ok(Self::year_only(year)),
                Some(_) => Err(bad()),
            },
            (Some(m), None) => Self::year_month(year, m.parse().map_err(|_| bad())?),
            (Some(m), Some(d)) if unknown_part(d) => Self::year_month(year, m.parse().map_err(|_| bad())?),
            (Some(m), Some(d)) => Self::ymd(year, m.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?),
            (None, Some(_)) => Err(bad()),
        }
    }
}

impl Serialize for CalendarDate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CalendarDate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Calendar date as a year plus the elapsed fraction of that year.
///
/// Day precision is leap-aware; a month-only date is read as the 15th and a
/// year-only date as mid-year.
pub fn to_decimal_year(date: &CalendarDate) -> f64 {
    match date.completed_month_day() {
        None => f64::from(date.year) + 0.5,
        Some((m, d)) => {
            let day_of_year = days_from_civil(date.year, m, d) - days_from_civil(date.year, 1, 1);
            f64::from(date.year) + day_of_year as f64 / f64::from(days_in_year(date.year))
        }
    }
}

/// Lifespan in years between two dates.
///
/// If either date is year-only the result is the whole-year difference, which
/// is how catalog lifespans are estimated. Otherwise it is the day count over
/// [`DAYS_PER_YEAR`], with unknown days taken as the 15th; when that puts the
/// end a few days before launch inside a shared month the result is zero.
pub fn lifespan_years(launch: &CalendarDate, end: &CalendarDate) -> Result<f64> {
    if end.cmp_shared(launch) == Ordering::Less {
        return Err(Error::NegativeLifespan {
            launch: launch.to_string(),
            end: end.to_string(),
        });
    }
    match (launch.day_number(), end.day_number()) {
        (Some(a), Some(b)) => Ok((b - a).max(0) as f64 / DAYS_PER_YEAR),
        _ => Ok(f64::from(end.year - launch.year)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Operational,
    Ended,
    ExcludedInOrbit,
    ExcludedNoStatusDate,
}

impl RecordStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Operational => "operational",
            Self::Ended => "ended",
            Self::ExcludedInOrbit => "excluded_in_orbit",
            Self::ExcludedNoStatusDate => "excluded_no_status_date",
        }
    }
}

impl FromStr for RecordStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "operational" => Ok(Self::Operational),
            "ended" => Ok(Self::Ended),
            "excluded_in_orbit" => Ok(Self::ExcludedInOrbit),
            "excluded_no_status_date" => Ok(Self::ExcludedNoStatusDate),
            other => Err(Error::MalformedRow {
                row: 0,
                reason: format!("unknown status {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    MissionList,
    Satcat,
}

/// One spacecraft or satellite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub id: String,
    pub name: String,
    pub operator: Option<String>,
    pub launch: CalendarDate,
    /// `None` while the craft is still operating, or when the source gives no end.
    pub end: Option<CalendarDate>,
    pub status: RecordStatus,
    pub source: Source,
}

impl LifespanRecord {
    /// Builds a record, rejecting an end date that precedes the launch.
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        operator: Option<String>,
        launch: CalendarDate,
        end: Option<CalendarDate>,
        status: RecordStatus,
        source: Source,
    ) -> Result<Self> {
        if let Some(end) = &end {
            lifespan_years(&launch, end)?;
        }
        Ok(Self {
            id: id.into(),
            name: name.into(),
            operator,
            launch,
            end,
            status,
            source,
        })
    }

    pub fn lifespan(&self) -> Option<f64> {
        self.end.as_ref().and_then(|end| lifespan_years(&self.launch, end).ok())
    }

    pub fn end_decimal_year(&self) -> Option<f64> {
        self.end.as_ref().map(to_decimal_year)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub end_time: f64,
    pub lifespan: f64,
    pub id: String,
}

/// Lifespans keyed by the decimal year they ended, ascending.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EndDatedSeries {
    points: Vec<SeriesPoint>,
}

impl EndDatedSeries {
    /// Sorts by end time (ties by id) after checking every lifespan is positive.
    pub fn new(mut points: Vec<SeriesPoint>) -> Result<Self> {
        for p in &points {
            if !p.end_time.is_finite() || !(p.lifespan.is_finite() && p.lifespan > 0.0) {
                return Err(Error::MalformedRow {
                    row: 0,
                    reason: format!(
                        "point {:?} has end time {} and lifespan {}; lifespans must be positive",
                        p.id, p.end_time, p.lifespan
                    ),
                });
            }
        }
        points.sort_by(|a, b| a.end_time.total_cmp(&b.end_time).then_with(|| a.id.cmp(&b.id)));
        Ok(Self { points })
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest and largest end time.
    pub fn extent(&self) -> Option<(f64, f64)> {
        Some((self.points.first()?.end_time, self.points.last()?.end_time))
    }
}

/// A lifespan paired with its ordinality (count of craft ended so far).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumePoint {
    pub ordinality: f64,
    pub end_time: f64,
    pub lifespan: f64,
    pub id: String,
}

/// Lifespans against cumulative volume. The volume of a point is its
/// ordinality plus the series offset, which stands in for units produced
/// before the first counted one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VolumeSeries {
    points: Vec<VolumePoint>,
    offset: u32,
}

impl VolumeSeries {
    pub fn new(points: Vec<VolumePoint>, offset: u32) -> Result<Self> {
        for p in &points {
            let volume = p.ordinality + f64::from(offset);
            if !(volume.is_finite() && volume > 0.0) || !(p.lifespan.is_finite() && p.lifespan > 0.0) {
                return Err(Error::MalformedRow {
                    row: 0,
                    reason: format!(
                        "point {:?} has volume {} and lifespan {}; both must be positive",
                        p.id, volume, p.lifespan
                    ),
                });
            }
        }
        Ok(Self { points, offset })
    }

    pub fn points(&self) -> &[VolumePoint] {
        &self.points
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn volume(&self, point: &VolumePoint) -> f64 {
        point.ordinality + f64::from(self.offset)
    }

    /// Smallest and largest end time.
    pub fn end_time_extent(&self) -> Option<(f64, f64)> {
        let first = self.points.first()?.end_time;
        Some(
            self.points
                .iter()
                .fold((first, first), |(lo, hi), p| (lo.min(p.end_time), hi.max(p.end_time))),
        )
    }

    /// The same points keyed by end time only.
    pub fn to_end_dated(&self) -> EndDatedSeries {
        EndDatedSeries::new(
            self.points
                .iter()
                .map(|p| SeriesPoint {
                    end_time: p.end_time,
                    lifespan: p.lifespan,
                    id: p.id.clone(),
                })
                .collect(),
        )
        .expect("volume series points already validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualSpace {
    Log2,
    Linear,
}

/// Exponential-in-time model: `lifespan = 2^(intercept + slope * (t - base_year))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MooreFit {
    pub base_year: f64,
    pub intercept_log2: f64,
    /// log2 growth per year.
    pub slope_log2: f64,
    pub fit_window: (f64, f64),
    pub residual_space: ResidualSpace,
}

impl MooreFit {
    /// Builds a model from the `coefficient * 2^((t - base_year) / doubling)` form.
    pub fn from_coefficient(base_year: f64, coefficient: f64, doubling_period: f64) -> Self {
        Self {
            base_year,
            intercept_log2: coefficient.log2(),
            slope_log2: 1.0 / doubling_period,
            fit_window: (base_year, base_year),
            residual_space: ResidualSpace::Log2,
        }
    }

    pub fn predict(&self, t: f64) -> f64 {
        (self.intercept_log2 + self.slope_log2 * (t - self.base_year)).exp2()
    }

    /// Lifespan at the base year.
    pub fn coefficient(&self) -> f64 {
        self.intercept_log2.exp2()
    }
}

/// Power-in-volume model: `lifespan = scale_b * (ordinality + volume_offset)^exponent_w`.
///
/// A fit to declining data can come out with a non-positive exponent; the
/// forecasting functions refuse such models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightFit {
    pub scale_b: f64,
    pub exponent_w: f64,
    pub volume_offset: u32,
    pub fit_window: Option<(f64, f64)>,
    pub residual_space: ResidualSpace,
}

impl WrightFit {
    pub fn new(scale_b: f64, exponent_w: f64, volume_offset: u32) -> Self {
        Self {
            scale_b,
            exponent_w,
            volume_offset,
            fit_window: None,
            residual_space: ResidualSpace::Log2,
        }
    }

    pub fn predict(&self, ordinality: f64) -> f64 {
        self.scale_b * (ordinality + f64::from(self.volume_offset)).powf(self.exponent_w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualRow {
    pub year: i32,
    pub ended_count: usize,
    /// `None` for years in which nothing ended.
    pub mean_lifespan: Option<f64>,
    pub cumulative_ordinality: usize,
}

/// Per-end-year counts and mean lifespans with the running total of ended craft.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnualAggregate {
    pub rows: Vec<AnnualRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Moore,
    Wright,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub moore_rms: f64,
    pub wright_rms: f64,
    pub residual_space: ResidualSpace,
    pub n_points: usize,
    pub winner: Winner,
}

impl ComparisonReport {
    pub fn new(moore_rms: f64, wright_rms: f64, residual_space: ResidualSpace, n_points: usize) -> Self {
        let scale = moore_rms.abs().max(wright_rms.abs());
        let tol = (TIE_RELATIVE_TOLERANCE * scale).max(TIE_ABSOLUTE_FLOOR);
        let winner = if (moore_rms - wright_rms).abs() <= tol {
            Winner::Tie
        } else if moore_rms < wright_rms {
            Winner::Moore
        } else {
            Winner::Wright
        };
        Self {
            moore_rms,
            wright_rms,
            residual_space,
            n_points,
            winner,
        }
    }
}
