//! Dataset construction and the questions asked of fitted models.
//!
//! Lifespans are attached to the date a craft stopped working, never to its
//! launch: a launch cohort that still has craft running only reports its
//! short-lived members, while an end year is complete as soon as it is over.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::fitting::rms_error;
use crate::model::{
    AnnualAggregate, AnnualRow, ComparisonReport, EndDatedSeries, LifespanRecord, MooreFit, RecordStatus,
    ResidualSpace, SeriesPoint, VolumePoint, VolumeSeries, WrightFit,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesBuild {
    pub series: EndDatedSeries,
    /// Craft still operating; they have no end date to attach a lifespan to.
    pub dropped_operational: usize,
    /// Records with no end date for other reasons (e.g. excluded catalog entries).
    pub dropped_without_end: usize,
    /// Zero lifespans, which have no logarithm.
    pub dropped_nonpositive: usize,
}

impl SeriesBuild {
    pub fn dropped(&self) -> usize {
        self.dropped_operational + self.dropped_without_end + self.dropped_nonpositive
    }
}

/// Turns ended records into `(end decimal year, lifespan)` points, sorted by end time.
pub fn build_end_dated_series(records: &[LifespanRecord]) -> SeriesBuild {
    let mut build = SeriesBuild::default();
    let mut points = Vec::with_capacity(records.len());
    for r in records {
        let (Some(end_time), Some(lifespan)) = (r.end_decimal_year(), r.lifespan()) else {
            if r.status == RecordStatus::Operational {
                build.dropped_operational += 1;
            } else {
                build.dropped_without_end += 1;
            }
            continue;
        };
        if lifespan <= 0.0 {
            build.dropped_nonpositive += 1;
            continue;
        }
        points.push(SeriesPoint {
            end_time,
            lifespan,
            id: r.id.clone(),
        });
    }
    build.series = EndDatedSeries::new(points).expect("points checked positive and finite");
    build
}

/// Numbers the points 1, 2, ... in end-date order; the volume of point `i` is `i + offset`.
pub fn assign_ordinality(series: &EndDatedSeries, offset: i64) -> Result<VolumeSeries> {
    let offset = u32::try_from(offset).map_err(|_| Error::NegativeOffset(offset))?;
    let points = series
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| VolumePoint {
            ordinality: (i + 1) as f64,
            end_time: p.end_time,
            lifespan: p.lifespan,
            id: p.id.clone(),
        })
        .collect();
    VolumeSeries::new(points, offset)
}

/// Per-end-year count and mean lifespan of ended records, with a running count.
///
/// Every year between the first and last end year gets a row; years in which
/// nothing ended have a count of zero and no mean.
pub fn aggregate_annual(records: &[LifespanRecord]) -> AnnualAggregate {
    let mut by_year: BTreeMap<i32, (usize, f64)> = BTreeMap::new();
    for r in records {
        if let (Some(end), Some(lifespan)) = (r.end, r.lifespan()) {
            let entry = by_year.entry(end.year()).or_default();
            entry.0 += 1;
            entry.1 += lifespan;
        }
    }
    let (Some(&first), Some(&last)) = (by_year.keys().next(), by_year.keys().next_back()) else {
        return AnnualAggregate::default();
    };
    let mut cumulative = 0;
    let rows = (first..=last)
        .map(|year| {
            let (count, sum) = by_year.get(&year).copied().unwrap_or_default();
            cumulative += count;
            AnnualRow {
                year,
                ended_count: count,
                mean_lifespan: (count > 0).then(|| sum / count as f64),
                cumulative_ordinality: cumulative,
            }
        })
        .collect();
    AnnualAggregate { rows }
}

fn fittable_rows(agg: &AnnualAggregate) -> impl Iterator<Item = (&AnnualRow, f64)> {
    agg.rows
        .iter()
        .filter_map(|r| r.mean_lifespan.filter(|&m| m > 0.0).map(|m| (r, m)))
}

/// Annual means keyed by end year, skipping years with no (or a zero) mean.
pub fn annual_mean_series(agg: &AnnualAggregate) -> EndDatedSeries {
    EndDatedSeries::new(
        fittable_rows(agg)
            .map(|(r, mean)| SeriesPoint {
                end_time: f64::from(r.year),
                lifespan: mean,
                id: r.year.to_string(),
            })
            .collect(),
    )
    .expect("means are positive")
}

/// Annual means keyed by the cumulative count of ended craft through that year.
pub fn annual_volume_series(agg: &AnnualAggregate, offset: u32) -> VolumeSeries {
    VolumeSeries::new(
        fittable_rows(agg)
            .map(|(r, mean)| VolumePoint {
                ordinality: r.cumulative_ordinality as f64,
                end_time: f64::from(r.year),
                lifespan: mean,
                id: r.year.to_string(),
            })
            .collect(),
        offset,
    )
    .expect("means and cumulative counts are positive")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Moore,
    Wright,
}

/// First end year each law is fitted from, plus a shared last year. All bounds inclusive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub moore_start_year: Option<i32>,
    pub wright_start_year: Option<i32>,
    pub end_year: Option<i32>,
}

impl WindowPolicy {
    pub fn validate(&self) -> Result<()> {
        if let Some(end) = self.end_year {
            for start in [self.moore_start_year, self.wright_start_year].into_iter().flatten() {
                if start > end {
                    return Err(Error::InvalidWindow { start, end });
                }
            }
        }
        Ok(())
    }

    pub fn start_for(&self, law: Law) -> Option<i32> {
        match law {
            Law::Moore => self.moore_start_year,
            Law::Wright => self.wright_start_year,
        }
    }

    fn admits(&self, law: Law, year: i32) -> bool {
        self.start_for(law).is_none_or(|s| year >= s) && self.end_year.is_none_or(|e| year <= e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Windowed<T> {
    pub data: T,
    pub trimmed: usize,
}

/// Restricting a dataset to the years a law is fitted over.
///
/// Only membership changes; retained rows keep their values, including
/// ordinalities counted over the full dataset.
pub trait Windowable: Sized {
    fn apply_window(&self, policy: &WindowPolicy, law: Law) -> Result<Windowed<Self>>;
}

fn end_year_of(t: f64) -> i32 {
    t.floor() as i32
}

fn split<T: Clone>(items: &[T], keep: impl Fn(&T) -> bool) -> Result<(Vec<T>, usize)> {
    let kept: Vec<T> = items.iter().filter(|x| keep(x)).cloned().collect();
    if kept.is_empty() {
        return Err(Error::EmptyAfterWindow);
    }
    let trimmed = items.len() - kept.len();
    Ok((kept, trimmed))
}

impl Windowable for EndDatedSeries {
    fn apply_window(&self, policy: &WindowPolicy, law: Law) -> Result<Windowed<Self>> {
        policy.validate()?;
        let (kept, trimmed) = split(self.points(), |p| policy.admits(law, end_year_of(p.end_time)))?;
        Ok(Windowed {
            data: EndDatedSeries::new(kept)?,
            trimmed,
        })
    }
}

impl Windowable for VolumeSeries {
    fn apply_window(&self, policy: &WindowPolicy, law: Law) -> Result<Windowed<Self>> {
        policy.validate()?;
        let (kept, trimmed) = split(self.points(), |p| policy.admits(law, end_year_of(p.end_time)))?;
        Ok(Windowed {
            data: VolumeSeries::new(kept, self.offset())?,
            trimmed,
        })
    }
}

impl Windowable for AnnualAggregate {
    fn apply_window(&self, policy: &WindowPolicy, law: Law) -> Result<Windowed<Self>> {
        policy.validate()?;
        let (rows, trimmed) = split(&self.rows, |r| policy.admits(law, r.year))?;
        Ok(Windowed {
            data: AnnualAggregate { rows },
            trimmed,
        })
    }
}

const WINDOW_MATCH_TOLERANCE: f64 = 1e-9;

fn same_window(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() <= WINDOW_MATCH_TOLERANCE && (a.1 - b.1).abs() <= WINDOW_MATCH_TOLERANCE
}

/// RMS of both models over one series, and which is smaller.
///
/// The series carries end times (for Moore) and ordinalities (for Wright).
/// Both models must have been fitted over the series' end-time span.
pub fn compare_models(
    series: &VolumeSeries,
    moore: &MooreFit,
    wright: &WrightFit,
    space: ResidualSpace,
) -> Result<ComparisonReport> {
    let extent = series.end_time_extent().ok_or(Error::EmptySeries)?;
    if !same_window(moore.fit_window, extent) {
        return Err(Error::MismatchedSeries {
            model: moore.fit_window,
            series: extent,
        });
    }
    if let Some(window) = wright.fit_window {
        if !same_window(window, extent) {
            return Err(Error::MismatchedSeries {
                model: window,
                series: extent,
            });
        }
    }
    let by_time: Vec<(f64, f64)> = series.points().iter().map(|p| (p.end_time, p.lifespan)).collect();
    let by_ordinality: Vec<(f64, f64)> = series.points().iter().map(|p| (p.ordinality, p.lifespan)).collect();
    let moore_rms = rms_error(&by_time, moore, space)?;
    let wright_rms = rms_error(&by_ordinality, wright, space)?;
    Ok(ComparisonReport::new(moore_rms, wright_rms, space, series.len()))
}

fn check_target(target: f64) -> Result<()> {
    if target.is_finite() && target > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTarget(target))
    }
}

/// The decimal year at which a growing Moore law reaches `target` years of lifespan.
pub fn year_for_lifespan(fit: &MooreFit, target: f64) -> Result<f64> {
    check_target(target)?;
    if fit.slope_log2.is_nan() || fit.slope_log2 <= 0.0 {
        return Err(Error::NoGrowth(fit.slope_log2));
    }
    Ok(fit.base_year + (target.log2() - fit.intercept_log2) / fit.slope_log2)
}

/// The ordinality (real-valued; round up for a count) at which a Wright law reaches `target`.
pub fn volume_for_lifespan(fit: &WrightFit, target: f64) -> Result<f64> {
    check_target(target)?;
    if fit.exponent_w.is_nan() || fit.exponent_w <= 0.0 {
        return Err(Error::NoGrowth(fit.exponent_w));
    }
    if fit.scale_b.is_nan() || fit.scale_b <= 0.0 {
        return Err(Error::InvalidTarget(fit.scale_b));
    }
    Ok((target / fit.scale_b).powf(1.0 / fit.exponent_w) - f64::from(fit.volume_offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitting::{fit_moore, fit_wright};
    use crate::model::{CalendarDate, Source};

    fn record(id: &str, launch: &str, end: Option<&str>) -> LifespanRecord {
        LifespanRecord::new(
            id,
            id,
            None,
            launch.parse().unwrap(),
            end.map(|e| e.parse().unwrap()),
            if end.is_some() {
                RecordStatus::Ended
            } else {
                RecordStatus::Operational
            },
            Source::MissionList,
        )
        .unwrap()
    }

    fn sat(id: &str, launch: i32, end: i32) -> LifespanRecord {
        LifespanRecord::new(
            id,
            id,
            None,
            CalendarDate::year_only(launch),
            Some(CalendarDate::year_only(end)),
            RecordStatus::Ended,
            Source::Satcat,
        )
        .unwrap()
    }

    #[test]
    fn end_dated_series_drops_operational_and_sorts() {
        let recs = vec![
            record("c", "2000-01-01", Some("2005-01-01")),
            record("voyager2", "1977-08-20", None),
            record("a", "1990-01-01", Some("1991-06-01")),
            record("b", "1995-01-01", Some("1999-01-01")),
        ];
        let build = build_end_dated_series(&recs);
        let ids: Vec<_> = build.series.points().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(build.dropped_operational, 1);
        assert_eq!(build.series.len() + build.dropped(), recs.len());
        assert!(build_end_dated_series(&[]).series.is_empty());
    }

    #[test]
    fn ordinality_examples() {
        let recs: Vec<_> = (0..50)
            .map(|i| record(&format!("r{i:02}"), "1959-01-01", Some(&format!("{}-01-01", 1960 + i))))
            .collect();
        let series = build_end_dated_series(&recs).series;
        let v7 = assign_ordinality(&series, 7).unwrap();
        assert_eq!(v7.volume(&v7.points()[0]), 8.0);
        assert_eq!(v7.volume(&v7.points()[49]), 57.0);
        let v0 = assign_ordinality(&series, 0).unwrap();
        assert_eq!(v0.volume(&v0.points()[0]), 1.0);
        assert!(matches!(assign_ordinality(&series, -1), Err(Error::NegativeOffset(-1))));
    }

    #[test]
    fn aggregate_examples() {
        let one = aggregate_annual(&[sat("x", 1986, 1990)]);
        assert_eq!(
            one.rows,
            [AnnualRow {
                year: 1990,
                ended_count: 1,
                mean_lifespan: Some(4.0),
                cumulative_ordinality: 1
            }]
        );
        let two = aggregate_annual(&[sat("x", 1988, 1990), sat("y", 1986, 1990)]);
        assert_eq!(two.rows[0].mean_lifespan, Some(3.0));
        let gap = aggregate_annual(&[sat("x", 1988, 1990), sat("y", 1986, 1993)]);
        assert_eq!(gap.rows.len(), 4);
        assert_eq!(gap.rows[1].ended_count, 0);
        assert_eq!(gap.rows[1].mean_lifespan, None);
        assert_eq!(gap.rows[1].cumulative_ordinality, 1);
        assert_eq!(gap.rows[3].cumulative_ordinality, 2);
        assert_eq!(annual_mean_series(&gap).len(), 2);
    }

    #[test]
    fn window_examples() {
        let recs: Vec<_> = (1957..=1970).map(|y| sat(&y.to_string(), y - 1, y)).collect();
        let agg = aggregate_annual(&recs);
        let wright = WindowPolicy {
            wright_start_year: Some(1961),
            ..Default::default()
        };
        let w = agg.apply_window(&wright, Law::Wright).unwrap();
        assert_eq!(w.trimmed, 4);
        assert_eq!(w.data.rows[0].year, 1961);
        assert_eq!(w.data.rows[0].cumulative_ordinality, 5);
        let moore = WindowPolicy {
            moore_start_year: Some(1967),
            ..Default::default()
        };
        assert_eq!(agg.apply_window(&moore, Law::Moore).unwrap().data.rows[0].year, 1967);
        // the Moore start does not apply to Wright
        assert_eq!(agg.apply_window(&moore, Law::Wright).unwrap().trimmed, 0);
        let identity = agg.apply_window(&WindowPolicy::default(), Law::Moore).unwrap();
        assert_eq!(identity.data, agg);
        let empty = WindowPolicy {
            moore_start_year: Some(2000),
            ..Default::default()
        };
        assert!(matches!(
            agg.apply_window(&empty, Law::Moore),
            Err(Error::EmptyAfterWindow)
        ));
        let inverted = WindowPolicy {
            moore_start_year: Some(2000),
            end_year: Some(1990),
            ..Default::default()
        };
        assert!(matches!(
            agg.apply_window(&inverted, Law::Moore),
            Err(Error::InvalidWindow { .. })
        ));
    }

    fn wright_generated(n: u32) -> VolumeSeries {
        VolumeSeries::new(
            (1..=n)
                .map(|i| VolumePoint {
                    ordinality: f64::from(i),
                    end_time: 1960.0 + f64::from(i) * 0.75,
                    lifespan: 0.01 * f64::from(i + 7).powf(2.0),
                    id: i.to_string(),
                })
                .collect(),
            7,
        )
        .unwrap()
    }

    #[test]
    fn compare_prefers_the_generating_law() {
        let series = wright_generated(40);
        let (moore, _) = fit_moore(&series.to_end_dated(), 1960.0, ResidualSpace::Log2).unwrap();
        let (wright, _) = fit_wright(&series, ResidualSpace::Log2).unwrap();
        let report = compare_models(&series, &moore, &wright, ResidualSpace::Log2).unwrap();
        assert_eq!(report.winner, crate::Winner::Wright);
        assert!(report.moore_rms > 0.01);
        assert!(report.wright_rms < 1e-9);
        assert_eq!(report.n_points, 40);
    }

    #[test]
    fn compare_rejects_mismatched_windows() {
        let series = wright_generated(40);
        let (wright, _) = fit_wright(&series, ResidualSpace::Log2).unwrap();
        let shorter = VolumeSeries::new(series.points()[5..].to_vec(), 7).unwrap();
        let (moore, _) = fit_moore(&shorter.to_end_dated(), 1960.0, ResidualSpace::Log2).unwrap();
        assert!(matches!(
            compare_models(&series, &moore, &wright, ResidualSpace::Log2),
            Err(Error::MismatchedSeries { .. })
        ));
    }

    #[test]
    fn forecast_examples() {
        let satellite_moore = MooreFit::from_coefficient(1957.0, 0.549, 12.17);
        let year = year_for_lifespan(&satellite_moore, 100.0).unwrap();
        assert!((year - 2048.3842639082027).abs() < 1e-9);
        assert!((satellite_moore.predict(year) - 100.0).abs() < 1e-9);
        let y2000 = satellite_moore.predict(2000.0);
        assert!((year_for_lifespan(&satellite_moore, y2000).unwrap() - 2000.0).abs() < 1e-9);
        let flat = MooreFit {
            slope_log2: 0.0,
            ..satellite_moore
        };
        assert!(matches!(year_for_lifespan(&flat, 100.0), Err(Error::NoGrowth(_))));
        assert!(matches!(
            year_for_lifespan(&satellite_moore, -1.0),
            Err(Error::InvalidTarget(_))
        ));

        let mission_wright = WrightFit::new(1.143e-5, 2.528, 7);
        let at64 = 1.143e-5 * 64f64.powf(2.528);
        assert!((volume_for_lifespan(&mission_wright, at64).unwrap() - 57.0).abs() < 1e-9);
        let unit = WrightFit::new(0.5, 1.7, 0);
        assert!((volume_for_lifespan(&unit, 0.5).unwrap() - 1.0).abs() < 1e-12);
        // independent evaluation: (1/1.143e-5)^(1/2.528) - 7
        assert!((volume_for_lifespan(&mission_wright, 1.0).unwrap() - 83.13361214282615).abs() < 1e-9);
        assert!(matches!(
            volume_for_lifespan(&WrightFit::new(1.0, 0.0, 0), 2.0),
            Err(Error::NoGrowth(_))
        ));
    }
}
