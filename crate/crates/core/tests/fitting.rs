use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spacelife::analysis::{volume_for_lifespan, year_for_lifespan};
use spacelife::fitting::{fit_moore_samples, fit_wright, rms_error};
use spacelife::{MooreFit, ResidualSpace, VolumePoint, VolumeSeries, WrightFit};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Noisy exponential samples over integer years.
fn noisy_moore(seed: u64, n: usize, intercept: f64, slope: f64, sigma: f64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let t = 1960.0 + i as f64;
            let noise = sigma * (rng.random::<f64>() * 2.0 - 1.0);
            (t, (intercept + slope * (t - 1960.0) + noise).exp2())
        })
        .collect()
}

fn sse(samples: &[(f64, f64)], model: &MooreFit, space: ResidualSpace) -> f64 {
    rms_error(samples, model, space).unwrap().powi(2) * samples.len() as f64
}

#[test]
fn log_fit_beats_random_perturbations() {
    let samples = noisy_moore(7, 59, -4.6642, 0.13817, 1.5);
    let (fit, _) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Log2).unwrap();
    let best = sse(&samples, &fit, ResidualSpace::Log2);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let scale = 10f64.powf(rng.random_range(-6.0..-1.0));
        let perturbed = MooreFit {
            intercept_log2: fit.intercept_log2 + scale * rng.random_range(-1.0..1.0),
            slope_log2: fit.slope_log2 + scale * rng.random_range(-1.0..1.0) / 30.0,
            ..fit
        };
        assert!(sse(&samples, &perturbed, ResidualSpace::Log2) >= best * (1.0 - 1e-12));
    }
}

#[test]
fn linear_fit_beats_random_perturbations() {
    let samples = noisy_moore(8, 59, -4.6642, 0.13817, 0.5);
    let (fit, diag) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Linear).unwrap();
    assert!(!diag.fallback);
    let best = sse(&samples, &fit, ResidualSpace::Linear);
    let (log_fit, _) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Log2).unwrap();
    assert!(best <= sse(&samples, &log_fit, ResidualSpace::Linear));
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..1000 {
        let scale = 10f64.powf(rng.random_range(-6.0..-1.0));
        let perturbed = MooreFit {
            intercept_log2: fit.intercept_log2 + scale * rng.random_range(-1.0..1.0),
            slope_log2: fit.slope_log2 + scale * rng.random_range(-1.0..1.0) / 30.0,
            ..fit
        };
        assert!(sse(&samples, &perturbed, ResidualSpace::Linear) >= best * (1.0 - 1e-9));
    }
}

#[test]
fn wright_log_fit_beats_random_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let points: Vec<VolumePoint> = (1..=120)
        .map(|i| VolumePoint {
            ordinality: f64::from(i),
            end_time: 1960.0 + f64::from(i) / 2.0,
            lifespan: 1.143e-5 * f64::from(i + 7).powf(2.528) * (rng.random_range(-1.0..1.0f64)).exp2(),
            id: i.to_string(),
        })
        .collect();
    let series = VolumeSeries::new(points, 7).unwrap();
    let (fit, _) = fit_wright(&series, ResidualSpace::Log2).unwrap();
    let samples: Vec<(f64, f64)> = series.points().iter().map(|p| (p.ordinality, p.lifespan)).collect();
    let sse = |m: &WrightFit| rms_error(&samples, m, ResidualSpace::Log2).unwrap().powi(2);
    let best = sse(&fit);
    for _ in 0..1000 {
        let scale = 10f64.powf(rng.random_range(-6.0..-1.0));
        let perturbed = WrightFit {
            scale_b: fit.scale_b * (scale * rng.random_range(-1.0..1.0)).exp2(),
            exponent_w: fit.exponent_w + scale * rng.random_range(-1.0..1.0),
            ..fit
        };
        assert!(sse(&perturbed) >= best * (1.0 - 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn base_year_shift_is_equivariant(seed in any::<u64>(), shift in -50.0f64..50.0) {
        let samples = noisy_moore(seed, 40, -2.0, 0.1, 1.0);
        let (a, _) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Log2).unwrap();
        let (b, _) = fit_moore_samples(&samples, 1960.0 + shift, ResidualSpace::Log2).unwrap();
        prop_assert!(close(a.slope_log2, b.slope_log2, 1e-12));
        prop_assert!((a.intercept_log2 + a.slope_log2 * shift - b.intercept_log2).abs() < 1e-12 * (1.0 + shift.abs()));
        for &(t, _) in &samples {
            prop_assert!(close(a.predict(t), b.predict(t), 1e-12));
        }
    }

    #[test]
    fn base_year_shift_is_equivariant_in_linear_space(seed in any::<u64>(), shift in -50.0f64..50.0) {
        let samples = noisy_moore(seed, 40, -2.0, 0.1, 0.3);
        let (a, da) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Linear).unwrap();
        let (b, db) = fit_moore_samples(&samples, 1960.0 + shift, ResidualSpace::Linear).unwrap();
        prop_assert!(!da.fallback && !db.fallback);
        // the linear-space minimum is flat to rounding, which pins parameters to about sqrt(eps)
        for &(t, _) in &samples {
            prop_assert!(close(a.predict(t), b.predict(t), 1e-6));
        }
    }

    #[test]
    fn noise_free_moore_is_recovered(intercept in -8.0f64..4.0, slope in -0.3f64..0.3, n in 3usize..80) {
        prop_assume!(slope.abs() > 1e-6);
        let samples = noisy_moore(0, n, intercept, slope, 0.0);
        for space in [ResidualSpace::Log2, ResidualSpace::Linear] {
            let (fit, _) = fit_moore_samples(&samples, 1960.0, space).unwrap();
            prop_assert!((fit.slope_log2 - slope).abs() <= 1e-9 * (1.0 + slope.abs()));
            prop_assert!((fit.intercept_log2 - intercept).abs() <= 1e-8 * (1.0 + intercept.abs()));
        }
    }

    #[test]
    fn noise_free_wright_is_recovered(log_b in -20.0f64..0.0, w in 0.2f64..3.5, offset in 0u32..20, n in 3u32..150) {
        let b = log_b.exp2();
        let points = (1..=n)
            .map(|i| VolumePoint {
                ordinality: f64::from(i),
                end_time: f64::from(i),
                lifespan: b * f64::from(i + offset).powf(w),
                id: i.to_string(),
            })
            .collect();
        let series = VolumeSeries::new(points, offset).unwrap();
        let (fit, _) = fit_wright(&series, ResidualSpace::Log2).unwrap();
        prop_assert!(close(fit.scale_b, b, 1e-8));
        prop_assert!(close(fit.exponent_w, w, 1e-9));
    }

    #[test]
    fn moore_forecast_round_trips(intercept in -8.0f64..4.0, slope in 1e-3f64..0.5, t in 1900.0f64..2200.0) {
        let fit = MooreFit { base_year: 1957.0, intercept_log2: intercept, slope_log2: slope, fit_window: (1957.0, 2018.0), residual_space: ResidualSpace::Log2 };
        let year = year_for_lifespan(&fit, fit.predict(t)).unwrap();
        prop_assert!((year - t).abs() <= 1e-9 * t.abs());
        let target = (intercept + slope * (t - 1957.0)).exp2();
        prop_assert!(close(fit.predict(year_for_lifespan(&fit, target).unwrap()), target, 1e-9));
    }

    #[test]
    fn wright_forecast_round_trips(log_b in -20.0f64..2.0, w in 0.1f64..4.0, offset in 0u32..20, ordinality in 1.0f64..1e5) {
        let fit = WrightFit::new(log_b.exp2(), w, offset);
        let back = volume_for_lifespan(&fit, fit.predict(ordinality)).unwrap();
        prop_assert!(close(back, ordinality, 1e-9) || (back - ordinality).abs() < 1e-9 * f64::from(offset + 1));
    }
}

/// Cumulative volume growing exponentially makes the two laws the same curve.
#[test]
fn exponential_volume_makes_both_laws_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (v0, doubling) = (20.0, 6.0);
    let points: Vec<VolumePoint> = (0..60)
        .map(|i| {
            let t = 1960.0 + f64::from(i);
            VolumePoint {
                ordinality: (v0 * (f64::from(i) / doubling).exp2()).round(),
                end_time: t,
                lifespan: (-3.0 + 0.12 * f64::from(i) + rng.random_range(-0.8..0.8)).exp2(),
                id: i.to_string(),
            }
        })
        .collect();
    let series = VolumeSeries::new(points, 0).unwrap();
    let (wright, _) = fit_wright(&series, ResidualSpace::Log2).unwrap();
    let samples: Vec<(f64, f64)> = series.points().iter().map(|p| (p.end_time, p.lifespan)).collect();
    let (moore, _) = fit_moore_samples(&samples, 1960.0, ResidualSpace::Log2).unwrap();
    for p in series.points() {
        let (m, w) = (moore.predict(p.end_time), wright.predict(p.ordinality));
        assert!((m - w).abs() <= 0.05 * m, "t={} moore={m} wright={w}", p.end_time);
    }
    // the implied Wright exponent is the Moore slope times the volume doubling time
    assert!(close(wright.exponent_w, moore.slope_log2 * doubling, 0.01));
}
