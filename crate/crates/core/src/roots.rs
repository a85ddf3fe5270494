//! Safeguarded scalar root finding for the front equations.
//!
//! Both the self-similar front and the perturbed front are roots of
//! `(x/2)·exp(k·x²/4) = target` for some `k ≥ 0`. In logarithmic form,
//! `g(x) = ln(x/2) + k·x²/4 − ln(target)`, the left side is strictly
//! increasing on `(0, ∞)` and free of overflow, so a bracket followed by
//! Newton iterations guarded by bisection converges from any start.

use crate::error::{Error, Result};

const MAX_EXPANSIONS: usize = 2048;
const MAX_ITERS: usize = 400;

/// Forward map `x ↦ (x/2)·exp(k·x²/4)`.
pub(crate) fn front_map(x: f64, k: f64) -> f64 {
    0.5 * x * (0.25 * k * x * x).exp()
}

/// Solves `front_map(x, k) = target` for `x > 0`.
pub(crate) fn solve_front(target: f64, k: f64) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::Domain(format!("target must be positive and finite, got {target}")));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("exponent coefficient must be nonnegative, got {k}")));
    }
    if k == 0.0 {
        return Ok(2.0 * target);
    }

    let log_target = target.ln();
    let g = |x: f64| (0.5 * x).ln() + 0.25 * k * x * x - log_target;
    let dg = |x: f64| 1.0 / x + 0.5 * k * x;

    // g(2·target) ≥ 0 always, so the root lies below 2·target.
    let mut hi = 2.0 * target;
    let mut expansions = 0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(Error::Convergence(format!("could not bracket root for target {target}")));
        }
    }
    let mut lo = 0.0_f64;
    let mut x = hi;

    for _ in 0..MAX_ITERS {
        let gx = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - gx / dg(x);
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else if lo > 0.0 {
            0.5 * (lo + hi)
        } else {
            // Geometric bisection toward zero handles roots many decades below hi.
            0.5 * hi
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * next.abs() {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence(format!("no convergence after {MAX_ITERS} iterations for target {target}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_case_is_exact() {
        assert_eq!(solve_front(0.3, 0.0).unwrap(), 0.6);
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(solve_front(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(solve_front(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(solve_front(f64::NAN, 1.0), Err(Error::Domain(_))));
        assert!(matches!(solve_front(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn large_exponent_and_large_target() {
        for &(t, k) in &[(0.5, 1e6), (1e3, 1.0), (1e-12, 1.0), (1e-8, 1e8)] {
            let x = solve_front(t, k).unwrap();
            let rel = (front_map(x, k) - t).abs() / t;
            assert!(rel < 1e-13, "t={t} k={k} x={x} rel={rel}");
        }
    }
}
