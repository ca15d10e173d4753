//! Monte Carlo fleets for comparing launch-year and end-date binning.
//!
//! Craft launched in year `y` live `2^(intercept + slope*(y - start) + noise)`
//! years. At the observation date, craft still running have no lifespan yet and
//! are dropped. Binning the rest by launch year loses the long-lived members of
//! recent cohorts; binning by end date does not.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fitting::fit_moore_samples;
use crate::model::{MooreFit, ResidualSpace};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetScenario {
    pub true_intercept_log2: f64,
    /// Generating log2 growth per launch year.
    pub true_slope_log2: f64,
    pub launches_per_year: u32,
    pub start_year: i32,
    /// Craft running at the start of this year are censored.
    pub observation_year: i32,
    /// Last launch year; defaults to the year before observation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_launch_year: Option<i32>,
    pub lifespan_noise_sigma_log2: f64,
    pub seed: u64,
}

impl Default for FleetScenario {
    fn default() -> Self {
        Self {
            true_intercept_log2: 0.0,
            true_slope_log2: 0.1,
            launches_per_year: 60,
            start_year: 1960,
            observation_year: 2018,
            last_launch_year: None,
            lifespan_noise_sigma_log2: 0.3,
            seed: 20_181_231,
        }
    }
}

impl FleetScenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidScenario(why.to_string()));
        if !self.true_intercept_log2.is_finite() || !self.true_slope_log2.is_finite() {
            return bad("generating law must be finite");
        }
        if self.launches_per_year == 0 {
            return bad("launches_per_year must be positive");
        }
        if self.observation_year <= self.start_year {
            return bad("observation_year must be after start_year");
        }
        if let Some(last) = self.last_launch_year {
            if last < self.start_year {
                return bad("last_launch_year precedes start_year");
            }
            if last >= self.observation_year {
                return bad("last_launch_year must be before observation_year");
            }
        }
        if !(self.lifespan_noise_sigma_log2 >= 0.0 && self.lifespan_noise_sigma_log2.is_finite()) {
            return bad("lifespan_noise_sigma_log2 must be finite and non-negative");
        }
        Ok(())
    }

    pub fn last_launch(&self) -> i32 {
        self.last_launch_year.unwrap_or(self.observation_year - 1)
    }

    pub fn launch_years(&self) -> std::ops::RangeInclusive<i32> {
        self.start_year..=self.last_launch()
    }

    /// Generating mean log2 lifespan for a launch year.
    pub fn true_mean_log2(&self, launch_year: i32) -> f64 {
        self.true_intercept_log2 + self.true_slope_log2 * f64::from(launch_year - self.start_year)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulatedCraft {
    pub launch_year: i32,
    /// Decimal year, uniform within the launch year.
    pub launch_time: f64,
    pub lifespan: f64,
}

impl SimulatedCraft {
    pub fn end_time(&self) -> f64 {
        self.launch_time + self.lifespan
    }

    pub fn is_operational(&self, observation_year: i32) -> bool {
        self.end_time() > f64::from(observation_year)
    }
}

/// Draws the fleet for `scenario.seed`, ordered by launch year then draw order.
pub fn generate_fleet(scenario: &FleetScenario) -> Result<Vec<SimulatedCraft>> {
    scenario.validate()?;
    Ok(generate_with_seed(scenario, scenario.seed))
}

fn generate_with_seed(scenario: &FleetScenario, seed: u64) -> Vec<SimulatedCraft> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = scenario.lifespan_noise_sigma_log2;
    let noise = Normal::new(0.0, sigma).expect("sigma validated");
    let per_year = scenario.launches_per_year as usize;
    let mut fleet = Vec::with_capacity(per_year * scenario.launch_years().count());
    for year in scenario.launch_years() {
        let mean = scenario.true_mean_log2(year);
        for _ in 0..per_year {
            let within: f64 = rng.random();
            let eps = if sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            fleet.push(SimulatedCraft {
                launch_year: year,
                launch_time: f64::from(year) + within,
                lifespan: (mean + eps).exp2(),
            });
        }
    }
    fleet
}

fn ended(fleet: &[SimulatedCraft], observation_year: i32) -> impl Iterator<Item = &SimulatedCraft> {
    fleet.iter().filter(move |c| !c.is_operational(observation_year))
}

fn base_year(fleet: &[SimulatedCraft]) -> f64 {
    fleet.iter().map(|c| c.launch_year).min().map_or(0.0, f64::from)
}

/// Regresses log2 lifespan of ended craft on integer launch year.
pub fn estimate_launch_binned(fleet: &[SimulatedCraft], observation_year: i32) -> Result<MooreFit> {
    let samples: Vec<(f64, f64)> = ended(fleet, observation_year)
        .map(|c| (f64::from(c.launch_year), c.lifespan))
        .collect();
    Ok(fit_moore_samples(&samples, base_year(fleet), ResidualSpace::Log2)?.0)
}

/// Regresses log2 lifespan of ended craft on end decimal year.
pub fn estimate_end_binned(fleet: &[SimulatedCraft], observation_year: i32) -> Result<MooreFit> {
    let samples: Vec<(f64, f64)> = ended(fleet, observation_year)
        .map(|c| (c.end_time(), c.lifespan))
        .collect();
    Ok(fit_moore_samples(&samples, base_year(fleet), ResidualSpace::Log2)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    pub n_ended: usize,
    pub n_operational: usize,
    pub launch_slope: Option<f64>,
    pub end_slope: Option<f64>,
    /// Mean log2 lifespan of ended craft from the last ten launch years that
    /// have any ended craft, and the generating mean for the same craft.
    pub final_decade_launch_mean_log2: Option<f64>,
    pub final_decade_true_mean_log2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeSummary {
    pub n: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    /// 5th and 95th percentiles; absent with fewer than two samples.
    pub q05: Option<f64>,
    pub q95: Option<f64>,
}

impl SlopeSummary {
    fn from_samples(samples: impl Iterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = samples.collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let spread = |q| (n >= 2).then(|| quantile(&v, q));
        Self {
            n,
            mean: (n > 0).then(|| v.iter().sum::<f64>() / n as f64),
            median: (n > 0).then(|| quantile(&v, 0.5)),
            q05: spread(0.05),
            q95: spread(0.95),
        }
    }

    /// Half the width of the central 90% interval.
    pub fn half_width_90(&self) -> Option<f64> {
        Some((self.q95? - self.q05?) / 2.0)
    }
}

/// Linear-interpolation quantile of sorted, nonempty data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub scenario: FleetScenario,
    pub n_seeds: usize,
    pub true_slope_log2: f64,
    /// Least-squares slope of log2 lifespan on end time over the whole
    /// population of craft ending before observation, by quadrature. This is
    /// what the end-binned estimator converges to; it differs from the launch
    /// slope because long-lived craft end later.
    pub end_reference_slope_log2: f64,
    pub failures: usize,
    pub launch_below_true: usize,
    pub launch_below_true_fraction: f64,
    pub final_decade_below_true: usize,
    pub final_decade_below_true_fraction: f64,
    pub launch_summary: SlopeSummary,
    pub end_summary: SlopeSummary,
    pub seeds: Vec<SeedResult>,
}

impl BiasReport {
    /// Whether the end-binned median sits within the central 90% half-width of its reference.
    pub fn end_median_near_reference(&self) -> Option<bool> {
        let half = self.end_summary.half_width_90()?;
        Some((self.end_summary.median? - self.end_reference_slope_log2).abs() <= half)
    }
}

/// Ended craft from the last ten launch years that have any, as
/// (observed mean log2 lifespan, generating mean log2 lifespan) over those craft.
fn final_decade_means(scenario: &FleetScenario, fleet: &[SimulatedCraft], obs: i32) -> Option<(f64, f64)> {
    let years: BTreeSet<i32> = ended(fleet, obs).map(|c| c.launch_year).collect();
    let first = *years.iter().rev().take(FINAL_DECADE_YEARS).next_back()?;
    let (observed, generating, n) =
        ended(fleet, obs)
            .filter(|c| c.launch_year >= first)
            .fold((0.0, 0.0, 0.0), |(o, g, n), c| {
                (
                    o + c.lifespan.log2(),
                    g + scenario.true_mean_log2(c.launch_year),
                    n + 1.0,
                )
            });
    Some((observed / n, generating / n))
}

const FINAL_DECADE_YEARS: usize = 10;

fn run_seed(scenario: &FleetScenario, seed: u64) -> SeedResult {
    let fleet = generate_with_seed(scenario, seed);
    let obs = scenario.observation_year;
    let n_operational = fleet.iter().filter(|c| c.is_operational(obs)).count();
    let decade = final_decade_means(scenario, &fleet, obs);
    let launch = estimate_launch_binned(&fleet, obs);
    let end = estimate_end_binned(&fleet, obs);
    let error = launch.as_ref().err().or(end.as_ref().err()).map(ToString::to_string);
    SeedResult {
        seed,
        n_ended: fleet.len() - n_operational,
        n_operational,
        launch_slope: launch.ok().map(|f| f.slope_log2),
        end_slope: end.ok().map(|f| f.slope_log2),
        final_decade_launch_mean_log2: decade.map(|d| d.0),
        final_decade_true_mean_log2: decade.map(|d| d.1),
        error,
    }
}

const QUAD_LAUNCH_NODES: usize = 200;
const QUAD_NOISE_NODES: usize = 401;
const QUAD_NOISE_SPAN_SIGMAS: f64 = 8.0;

/// Population least-squares slope of log2 lifespan on end time among ended craft.
pub fn end_reference_slope(scenario: &FleetScenario) -> Result<f64> {
    scenario.validate()?;
    let sigma = scenario.lifespan_noise_sigma_log2;
    let noise_nodes: Vec<(f64, f64)> = if sigma == 0.0 {
        vec![(0.0, 1.0)]
    } else {
        let h = 2.0 * QUAD_NOISE_SPAN_SIGMAS / (QUAD_NOISE_NODES - 1) as f64;
        (0..QUAD_NOISE_NODES)
            .map(|k| {
                let z = -QUAD_NOISE_SPAN_SIGMAS + h * k as f64;
                let w = (-0.5 * z * z).exp() * if k == 0 || k == QUAD_NOISE_NODES - 1 { 0.5 } else { 1.0 };
                (z * sigma, w)
            })
            .collect()
    };
    let obs = f64::from(scenario.observation_year);
    let (mut w, mut se, mut sl, mut see, mut sel) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for year in scenario.launch_years() {
        let mean = scenario.true_mean_log2(year);
        for j in 0..QUAD_LAUNCH_NODES {
            let launch = f64::from(year) + (j as f64 + 0.5) / QUAD_LAUNCH_NODES as f64;
            for &(eps, weight) in &noise_nodes {
                let l = mean + eps;
                let e = launch + l.exp2();
                if e > obs {
                    continue;
                }
                w += weight;
                se += weight * e;
                sl += weight * l;
                see += weight * e * e;
                sel += weight * e * l;
            }
        }
    }
    if w == 0.0 {
        return Err(Error::InsufficientData { needed: 2, found: 0 });
    }
    let (me, ml) = (se / w, sl / w);
    let var = see / w - me * me;
    if var.is_nan() || var <= 0.0 {
        return Err(Error::DegenerateAbscissa);
    }
    Ok((sel / w - me * ml) / var)
}

/// Runs both estimators on seeds `scenario.seed + 0 .. n_seeds - 1`.
///
/// Seeds run in parallel; results are collected by seed index so the report
/// does not depend on scheduling. A seed whose fit fails is counted in
/// `failures` and left out of the summaries.
pub fn run_bias_experiment(scenario: &FleetScenario, n_seeds: usize) -> Result<BiasReport> {
    scenario.validate()?;
    if n_seeds == 0 {
        return Err(Error::InvalidScenario("n_seeds must be at least 1".into()));
    }
    let seeds: Vec<SeedResult> = (0..n_seeds as u64)
        .into_par_iter()
        .map(|i| run_seed(scenario, scenario.seed.wrapping_add(i)))
        .collect();

    let truth = scenario.true_slope_log2;
    let failures = seeds.iter().filter(|s| s.error.is_some()).count();
    let launch_below_true = seeds
        .iter()
        .filter(|s| s.launch_slope.is_some_and(|b| b < truth))
        .count();
    let final_decade_below_true = seeds
        .iter()
        .filter(
            |s| match (s.final_decade_launch_mean_log2, s.final_decade_true_mean_log2) {
                (Some(observed), Some(generating)) => observed <= generating,
                _ => false,
            },
        )
        .count();
    Ok(BiasReport {
        scenario: scenario.clone(),
        n_seeds,
        true_slope_log2: truth,
        end_reference_slope_log2: end_reference_slope(scenario)?,
        failures,
        launch_below_true,
        launch_below_true_fraction: launch_below_true as f64 / n_seeds as f64,
        final_decade_below_true,
        final_decade_below_true_fraction: final_decade_below_true as f64 / n_seeds as f64,
        launch_summary: SlopeSummary::from_samples(seeds.iter().filter_map(|s| s.launch_slope)),
        end_summary: SlopeSummary::from_samples(seeds.iter().filter_map(|s| s.end_slope)),
        seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat() -> FleetScenario {
        FleetScenario {
            true_slope_log2: 0.0,
            lifespan_noise_sigma_log2: 0.0,
            launches_per_year: 3,
            start_year: 1960,
            observation_year: 1970,
            ..Default::default()
        }
    }

    #[test]
    fn noiseless_flat_fleet_lives_one_year() {
        let fleet = generate_fleet(&flat()).unwrap();
        assert_eq!(fleet.len(), 30);
        assert!(fleet.iter().all(|c| c.lifespan == 1.0));
        assert!(fleet.iter().all(|c| (1960..=1969).contains(&c.launch_year)));
    }

    #[test]
    fn growing_fleet_has_censored_recent_cohorts() {
        let scenario = FleetScenario {
            start_year: 1968,
            ..Default::default()
        };
        let fleet = generate_fleet(&scenario).unwrap();
        let operational = |year| {
            fleet
                .iter()
                .filter(|c| c.launch_year == year && c.is_operational(2018))
                .count()
        };
        assert_eq!(operational(1968), 0);
        assert_eq!(operational(2017), 60);
    }

    #[test]
    fn same_seed_same_fleet() {
        let s = FleetScenario::default();
        assert_eq!(generate_fleet(&s).unwrap(), generate_fleet(&s).unwrap());
        let other = FleetScenario {
            seed: s.seed + 1,
            ..s.clone()
        };
        assert_ne!(generate_fleet(&s).unwrap(), generate_fleet(&other).unwrap());
    }

    #[test]
    fn estimators_need_ended_craft() {
        assert!(matches!(
            estimate_launch_binned(&[], 2018),
            Err(Error::InsufficientData { .. })
        ));
        let fleet = generate_fleet(&flat()).unwrap();
        // every craft still running at the launch of the last cohort
        assert!(matches!(
            estimate_end_binned(&fleet, 1960),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn uncensored_noiseless_launch_fit_is_exact() {
        let scenario = FleetScenario {
            lifespan_noise_sigma_log2: 0.0,
            last_launch_year: Some(2000),
            observation_year: 3000,
            ..Default::default()
        };
        let fleet = generate_fleet(&scenario).unwrap();
        let fit = estimate_launch_binned(&fleet, scenario.observation_year).unwrap();
        assert!((fit.slope_log2 - 0.1).abs() < 1e-9);
        assert!(fit.intercept_log2.abs() < 1e-9);
    }

    #[test]
    fn final_decade_cohorts_fully_censored_contribute_nothing() {
        let scenario = FleetScenario {
            true_intercept_log2: 3.0,
            true_slope_log2: 0.0,
            lifespan_noise_sigma_log2: 0.0,
            ..Default::default()
        };
        // every craft lives 8 years, so launches from 2010 on are still running in 2018
        let fleet = generate_fleet(&scenario).unwrap();
        assert!(fleet
            .iter()
            .filter(|c| c.launch_year >= 2010)
            .all(|c| c.is_operational(2018)));
        let fit = estimate_launch_binned(&fleet, 2018).unwrap();
        assert!(fit.fit_window.1 <= 2009.0);
    }

    #[test]
    fn single_seed_report() {
        let report = run_bias_experiment(&FleetScenario::default(), 1).unwrap();
        assert_eq!(report.seeds.len(), 1);
        assert_eq!(report.launch_summary.n, 1);
        assert_eq!(report.launch_summary.median, report.seeds[0].launch_slope);
        assert_eq!(report.launch_summary.q05, None);
        assert_eq!(report.end_median_near_reference(), None);
        assert!(matches!(
            run_bias_experiment(&FleetScenario::default(), 0),
            Err(Error::InvalidScenario(_))
        ));
    }

    #[test]
    fn quantiles_interpolate() {
        let s = SlopeSummary::from_samples([4.0, 1.0, 3.0, 2.0, 5.0].into_iter());
        assert_eq!(s.median, Some(3.0));
        assert!((s.q05.unwrap() - 1.2).abs() < 1e-12);
        assert!((s.q95.unwrap() - 4.8).abs() < 1e-12);
    }

    #[test]
    fn invalid_scenarios() {
        let base = FleetScenario::default();
        for bad in [
            FleetScenario {
                launches_per_year: 0,
                ..base.clone()
            },
            FleetScenario {
                observation_year: 1960,
                ..base.clone()
            },
            FleetScenario {
                lifespan_noise_sigma_log2: -1.0,
                ..base.clone()
            },
            FleetScenario {
                last_launch_year: Some(2018),
                ..base.clone()
            },
        ] {
            assert!(matches!(generate_fleet(&bad), Err(Error::InvalidScenario(_))));
        }
    }
}
