//! Gauss-Newton refinement of `y = 2^(a + b*u)` under squared error in `y`.
//!
//! Both trend laws reduce to this form: Moore with `u = t - base_year`, Wright
//! with `u = log2(volume)`. The solver is seeded from the log-space line so
//! the result is deterministic, and each step is halved until the sum of
//! squares drops.

use std::f64::consts::LN_2;

pub const RELATIVE_STEP_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 60;
/// Relative decrease in the sum of squares below which rounding dominates.
const ROUNDING_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Outcome {
    pub intercept: f64,
    pub slope: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn sum_squares(u: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    u.iter()
        .zip(y)
        .map(|(&u, &y)| {
            let r = y - (a + b * u).exp2();
            r * r
        })
        .sum()
}

fn small_step(da: f64, db: f64, a: f64, b: f64) -> bool {
    let step = da.hypot(db);
    let size = a.hypot(b);
    step <= RELATIVE_STEP_TOLERANCE * (size + RELATIVE_STEP_TOLERANCE)
}

pub(crate) fn refine(u: &[f64], y: &[f64], intercept: f64, slope: f64) -> Outcome {
    let (mut a, mut b) = (intercept, slope);
    let mut sse = sum_squares(u, y, a, b);

    for iteration in 1..=MAX_ITERATIONS {
        if sse == 0.0 {
            return Outcome {
                intercept: a,
                slope: b,
                iterations: iteration - 1,
                converged: true,
            };
        }

        // Normal equations J^T J d = J^T r with columns d/da and d/db of 2^(a+bu).
        let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&u, &y) in u.iter().zip(y) {
            let f = (a + b * u).exp2();
            let r = y - f;
            let da = LN_2 * f;
            let db = da * u;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        let det = jaa * jbb - jab * jab;
        if !(det.is_finite() && det > 0.0) {
            break;
        }
        let step_a = (jbb * ga - jab * gb) / det;
        let step_b = (jaa * gb - jab * ga) / det;

        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let (na, nb) = (a + scale * step_a, b + scale * step_b);
            let candidate = sum_squares(u, y, na, nb);
            if candidate < sse {
                a = na;
                b = nb;
                sse = candidate;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }

        // No descent along the Gauss-Newton direction: either we are at the
        // minimum to within rounding, or the problem is badly conditioned.
        // The predicted decrease d^T J^T r tells the two apart.
        if !accepted {
            let predicted_decrease = step_a * ga + step_b * gb;
            return Outcome {
                intercept: a,
                slope: b,
                iterations: iteration,
                converged: small_step(step_a, step_b, a, b) || predicted_decrease <= ROUNDING_FLOOR * sse,
            };
        }
        if small_step(scale * step_a, scale * step_b, a, b) {
            return Outcome {
                intercept: a,
                slope: b,
                iterations: iteration,
                converged: true,
            };
        }
    }

    Outcome {
        intercept: a,
        slope: b,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_data_converges_immediately() {
        let u: Vec<f64> = (0..20).map(f64::from).collect();
        let y: Vec<f64> = u.iter().map(|u| (0.5 + 0.1 * u).exp2()).collect();
        let out = refine(&u, &y, 0.5, 0.1);
        assert!(out.converged);
        assert!(out.iterations <= 2);
        assert!((out.intercept - 0.5).abs() < 1e-12);
        assert!((out.slope - 0.1).abs() < 1e-12);
    }

    #[test]
    fn moves_from_a_poor_seed() {
        let u: Vec<f64> = (0..30).map(f64::from).collect();
        let y: Vec<f64> = u.iter().map(|u| (-1.0 + 0.2 * u).exp2()).collect();
        let out = refine(&u, &y, 0.0, 0.1);
        assert!(out.converged);
        assert!((out.intercept + 1.0).abs() < 1e-8, "{out:?}");
        assert!((out.slope - 0.2).abs() < 1e-8, "{out:?}");
    }

    #[test]
    fn linear_fit_lowers_linear_sse() {
        let u: Vec<f64> = (0..12).map(f64::from).collect();
        let y: Vec<f64> = u
            .iter()
            .enumerate()
            .map(|(i, u)| (0.3 * u).exp2() * if i % 2 == 0 { 1.3 } else { 0.8 })
            .collect();
        let before = sum_squares(&u, &y, 0.0, 0.3);
        let out = refine(&u, &y, 0.0, 0.3);
        assert!(out.converged);
        assert!(sum_squares(&u, &y, out.intercept, out.slope) <= before);
    }
}
