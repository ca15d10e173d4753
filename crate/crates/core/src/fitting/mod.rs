//! Least-squares estimation of the Moore and Wright laws, and the algebra of
//! doubling times and per-doubling factors derived from them.
//!
//! The canonical fit is ordinary least squares of `log2(lifespan)` against the
//! abscissa (time for Moore, `log2(volume)` for Wright), solved in closed form.
//! [`ResidualSpace::Linear`] refines that solution with Gauss-Newton so that
//! squared errors are measured in years instead.

mod gauss_newton;

use serde::{Deserialize, Serialize};

use crate::model::{EndDatedSeries, MooreFit, ResidualSpace, VolumeSeries, WrightFit};
use crate::{Error, Result};

pub use gauss_newton::{MAX_ITERATIONS, RELATIVE_STEP_TOLERANCE};

/// Minimum number of positive-lifespan points a fit needs.
pub const MIN_FIT_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub x: f64,
    pub observed: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub n_points: usize,
    /// Points left out because their lifespan has no logarithm.
    pub excluded_nonpositive: usize,
    pub rms_log2: f64,
    /// In years.
    pub rms_linear: f64,
    pub residuals: Vec<Residual>,
    /// Present when a linear-space refinement was attempted.
    pub refinement: Option<Refinement>,
    /// The refinement failed to converge and the log-space fit was returned instead.
    pub fallback: bool,
}

/// Anything that maps an abscissa to a predicted lifespan.
pub trait LifespanModel {
    fn predict(&self, x: f64) -> f64;
}

impl LifespanModel for MooreFit {
    fn predict(&self, t: f64) -> f64 {
        MooreFit::predict(self, t)
    }
}

impl LifespanModel for WrightFit {
    /// `x` is the ordinality; the model adds its own volume offset.
    fn predict(&self, ordinality: f64) -> f64 {
        WrightFit::predict(self, ordinality)
    }
}

/// Closed-form least-squares line `y = intercept + slope * u`.
pub(crate) fn ols_line(u: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    debug_assert_eq!(u.len(), y.len());
    if u.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: u.len(),
        });
    }
    let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if lo == hi {
        return Err(Error::DegenerateAbscissa);
    }
    let n = u.len() as f64;
    let u_mean = u.iter().sum::<f64>() / n;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&ui, &yi) in u.iter().zip(y) {
        let du = ui - u_mean;
        sxx += du * du;
        sxy += du * (yi - y_mean);
    }
    let slope = sxy / sxx;
    Ok((y_mean - slope * u_mean, slope))
}

/// Positive-lifespan points and the number dropped.
fn usable(points: impl Iterator<Item = (f64, f64)>) -> (Vec<(f64, f64)>, usize) {
    let mut dropped = 0;
    let kept = points
        .filter(|&(_, y)| {
            let ok = y > 0.0 && y.is_finite();
            dropped += usize::from(!ok);
            ok
        })
        .collect();
    (kept, dropped)
}

struct LineFit {
    intercept: f64,
    slope: f64,
    refinement: Option<Refinement>,
    fallback: bool,
}

/// Fits `lifespan = 2^(intercept + slope * u)` in the requested residual space.
fn fit_exp2_line(u: &[f64], lifespans: &[f64], space: ResidualSpace) -> Result<LineFit> {
    let logs: Vec<f64> = lifespans.iter().map(|y| y.log2()).collect();
    let (intercept, slope) = ols_line(u, &logs)?;
    match space {
        ResidualSpace::Log2 => Ok(LineFit {
            intercept,
            slope,
            refinement: None,
            fallback: false,
        }),
        ResidualSpace::Linear => {
            let out = gauss_newton::refine(u, lifespans, intercept, slope);
            let refinement = Some(Refinement {
                iterations: out.iterations,
                converged: out.converged,
            });
            if out.converged {
                Ok(LineFit {
                    intercept: out.intercept,
                    slope: out.slope,
                    refinement,
                    fallback: false,
                })
            } else {
                Ok(LineFit {
                    intercept,
                    slope,
                    refinement,
                    fallback: true,
                })
            }
        }
    }
}

fn diagnostics<M: LifespanModel>(
    model: &M,
    points: &[(f64, f64)],
    excluded_nonpositive: usize,
    line: &LineFit,
) -> FitDiagnostics {
    let residuals: Vec<Residual> = points
        .iter()
        .map(|&(x, observed)| Residual {
            x,
            observed,
            predicted: model.predict(x),
        })
        .collect();
    let n = residuals.len() as f64;
    let rms_log2 = (residuals
        .iter()
        .map(|r| (r.observed.log2() - r.predicted.log2()).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let rms_linear = (residuals
        .iter()
        .map(|r| (r.observed - r.predicted).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    FitDiagnostics {
        n_points: residuals.len(),
        excluded_nonpositive,
        rms_log2,
        rms_linear,
        residuals,
        refinement: line.refinement,
        fallback: line.fallback,
    }
}

fn check_count(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_POINTS,
            found: points.len(),
        });
    }
    Ok(())
}

/// Fits a Moore law to `(time, lifespan)` samples.
///
/// Non-positive lifespans are skipped and counted in the diagnostics.
pub fn fit_moore_samples(
    samples: &[(f64, f64)],
    base_year: f64,
    space: ResidualSpace,
) -> Result<(MooreFit, FitDiagnostics)> {
    if !base_year.is_finite() {
        return Err(Error::NonFinite("base year"));
    }
    let (points, excluded) = usable(samples.iter().copied());
    check_count(&points)?;
    let u: Vec<f64> = points.iter().map(|&(t, _)| t - base_year).collect();
    let y: Vec<f64> = points.iter().map(|&(_, l)| l).collect();
    let line = fit_exp2_line(&u, &y, space)?;
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let fit = MooreFit {
        base_year,
        intercept_log2: line.intercept,
        slope_log2: line.slope,
        fit_window: (lo, hi),
        residual_space: if line.fallback { ResidualSpace::Log2 } else { space },
    };
    let diag = diagnostics(&fit, &points, excluded, &line);
    Ok((fit, diag))
}

/// Fits `lifespan = 2^(intercept + slope * (end_time - base_year))`.
pub fn fit_moore(series: &EndDatedSeries, base_year: f64, space: ResidualSpace) -> Result<(MooreFit, FitDiagnostics)> {
    let samples: Vec<(f64, f64)> = series.points().iter().map(|p| (p.end_time, p.lifespan)).collect();
    fit_moore_samples(&samples, base_year, space)
}

/// Fits `lifespan = B * (ordinality + offset)^w`, the offset taken from the series.
pub fn fit_wright(series: &VolumeSeries, space: ResidualSpace) -> Result<(WrightFit, FitDiagnostics)> {
    let offset = f64::from(series.offset());
    let (points, excluded) = usable(series.points().iter().map(|p| (p.ordinality, p.lifespan)));
    check_count(&points)?;
    let u: Vec<f64> = points.iter().map(|&(o, _)| (o + offset).log2()).collect();
    let y: Vec<f64> = points.iter().map(|&(_, l)| l).collect();
    let line = fit_exp2_line(&u, &y, space)?;
    let fit = WrightFit {
        scale_b: line.intercept.exp2(),
        exponent_w: line.slope,
        volume_offset: series.offset(),
        fit_window: series.end_time_extent(),
        residual_space: if line.fallback { ResidualSpace::Log2 } else { space },
    };
    let diag = diagnostics(&fit, &points, excluded, &line);
    Ok((fit, diag))
}

/// Root-mean-square residual of `model` over `(x, lifespan)` samples.
///
/// In log2 space samples with non-positive lifespans are skipped.
pub fn rms_error<M: LifespanModel>(samples: &[(f64, f64)], model: &M, space: ResidualSpace) -> Result<f64> {
    let squares: Vec<f64> = match space {
        ResidualSpace::Log2 => samples
            .iter()
            .filter(|&&(_, y)| y > 0.0)
            .map(|&(x, y)| (y.log2() - model.predict(x).log2()).powi(2))
            .collect(),
        ResidualSpace::Linear => samples.iter().map(|&(x, y)| (y - model.predict(x)).powi(2)).collect(),
    };
    if squares.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok((squares.iter().sum::<f64>() / squares.len() as f64).sqrt())
}

/// Years for a Moore law to double. A flat trend has no doubling time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "trend", content = "years", rename_all = "snake_case")]
pub enum DoublingTime {
    Growing(f64),
    /// Negative: the years it takes to halve, with the sign kept.
    Declining(f64),
    NoTrend,
}

impl DoublingTime {
    /// The signed doubling time, if there is a trend.
    pub fn years(&self) -> Option<f64> {
        match *self {
            Self::Growing(y) | Self::Declining(y) => Some(y),
            Self::NoTrend => None,
        }
    }
}

pub fn doubling_time(fit: &MooreFit) -> DoublingTime {
    doubling_time_for_slope(fit.slope_log2)
}

pub fn doubling_time_for_slope(slope_log2: f64) -> DoublingTime {
    if slope_log2 == 0.0 {
        DoublingTime::NoTrend
    } else if slope_log2 > 0.0 {
        DoublingTime::Growing(1.0 / slope_log2)
    } else {
        DoublingTime::Declining(1.0 / slope_log2)
    }
}

/// Factor by which lifespan grows each time cumulative volume doubles.
pub fn wright_doubling_factor(exponent_w: f64) -> f64 {
    exponent_w.exp2()
}

/// Fractional volume increase that doubles lifespan.
pub fn wright_volume_increase_for_doubling(exponent_w: f64) -> Result<f64> {
    if exponent_w.is_nan() || exponent_w <= 0.0 {
        return Err(Error::NonpositiveExponent(exponent_w));
    }
    Ok((1.0 / exponent_w).exp2() - 1.0)
}
