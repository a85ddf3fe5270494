//! The self-similar profile: the steady state of the similarity-variable
//! system and, through `η = x/√(t+1)`, the attracting solution of the
//! physical problem.
//!
//! The profile is `U(η) = h·∫_η^ω exp(−s²/4) ds` on `[0, ω]`, where the
//! front `ω` is the unique positive root of `(ω/2)·exp(ω²/4) = h`.
//! Every evaluation goes through the closed form
//! `U(η) = h·√π·(erf(ω/2) − erf(η/2))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::{front_map, solve_front};
use crate::special::erf_diff;

/// Default relative tolerance for the front root.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Solves `(ω/2)·exp(ω²/4) = h` for the self-similar front `ω`.
///
/// The returned root satisfies `|(ω/2)e^{ω²/4} − h| ≤ tol·max(1, h)`.
///
/// ```
/// use selfsim_stefan::similarity::solve_omega;
/// let omega = solve_omega(0.6420127083438707, 1e-12).unwrap();
/// assert!((omega - 1.0).abs() < 1e-10);
/// ```
pub fn solve_omega(h: f64, tol: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("flux h must be positive, got {h}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let omega = solve_front(h, 1.0)?;
    let residual = (front_map(omega, 1.0) - h).abs();
    if residual > tol * h.max(1.0) {
        return Err(Error::Convergence(format!(
            "residual {residual:e} exceeds tolerance for h = {h}"
        )));
    }
    Ok(omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarProfile {
    h: f64,
    omega: f64,
}

impl SelfSimilarProfile {
    /// Builds the profile for flux amplitude `h` at the default tolerance.
    pub fn new(h: f64) -> Result<Self> {
        Self::with_tol(h, DEFAULT_TOL)
    }

    pub fn with_tol(h: f64, tol: f64) -> Result<Self> {
        let omega = solve_omega(h, tol)?;
        Ok(Self { h, omega })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    fn check(&self, eta: f64) -> Result<()> {
        if eta.is_nan() || eta < 0.0 || eta > self.omega {
            return Err(Error::Domain(format!("eta = {eta} outside [0, {}]", self.omega)));
        }
        Ok(())
    }

    /// `U(η)` for `η ∈ [0, ω]`.
    pub fn value(&self, eta: f64) -> Result<f64> {
        self.check(eta)?;
        Ok(self.value_unchecked(eta))
    }

    pub(crate) fn value_unchecked(&self, eta: f64) -> f64 {
        if eta >= self.omega {
            return 0.0;
        }
        (self.h * PI.sqrt() * erf_diff(0.5 * eta, 0.5 * self.omega)).max(0.0)
    }

    /// `U` continued by zero beyond the front.
    pub fn extended(&self, eta: f64) -> f64 {
        if eta >= self.omega {
            0.0
        } else {
            self.value_unchecked(eta.max(0.0))
        }
    }

    /// `U′(η) = −h·exp(−η²/4)`.
    pub fn slope(&self, eta: f64) -> Result<f64> {
        self.check(eta)?;
        Ok(-self.h * (-0.25 * eta * eta).exp())
    }

    /// Evaluates the self-similar solution in physical variables.
    ///
    /// Returns `(u(x, t), σ(t))` with `σ(t) = ω·√(t+1)` and
    /// `u = U(x/√(t+1))`, continued by zero past the front.
    pub fn physical(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
        }
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
        }
        let scale = (t + 1.0).sqrt();
        let eta = x / scale;
        let value = if eta <= self.omega { self.value_unchecked(eta) } else { 0.0 };
        Ok((value, self.omega * scale))
    }
}

pub fn profile_value(p: &SelfSimilarProfile, eta: f64) -> Result<f64> {
    p.value(eta)
}

pub fn profile_slope(p: &SelfSimilarProfile, eta: f64) -> Result<f64> {
    p.slope(eta)
}

pub fn physical_self_similar(p: &SelfSimilarProfile, x: f64, t: f64) -> Result<(f64, f64)> {
    p.physical(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_UNIT: f64 = 0.6420127083438707;

    /// Composite Simpson on [a, b]; test-only oracle for the profile integral.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let dx = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * dx);
        }
        s * dx / 3.0
    }

    #[test]
    fn omega_for_unit_front() {
        // 0.5·e^{1/4} rounded to f64 is 0.6420127083438707.
        assert_eq!(front_map(1.0, 1.0), H_UNIT);
        let w = solve_omega(H_UNIT, 1e-12).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn omega_small_flux_asymptotics() {
        let h = 1e-8;
        let w = solve_omega(h, 1e-12).unwrap();
        let asym = 2.0 * h * (1.0 - h * h);
        assert!(((w - asym) / asym).abs() < 1e-15, "w = {w:e}");
    }

    #[test]
    fn omega_is_monotone() {
        assert!(solve_omega(0.5, 1e-12).unwrap() < solve_omega(1.0, 1e-12).unwrap());
    }

    #[test]
    fn omega_reference_values() {
        for &(h, w) in &[
            (0.1, 0.1980484250753114644778968576539793852632),
            (2.0, 1.792100441560225494290149492782631836498),
            (10.0, 2.803477579294907543177702211809635300297),
        ] {
            assert!((solve_omega(h, 1e-12).unwrap() - w).abs() < 1e-14, "h={h}");
        }
    }

    #[test]
    fn omega_rejects_bad_input() {
        assert!(matches!(solve_omega(0.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(solve_omega(-2.0, 1e-12), Err(Error::Domain(_))));
        assert!(matches!(solve_omega(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn value_at_front_is_zero() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        assert_eq!(p.value(p.omega()).unwrap(), 0.0);
    }

    #[test]
    fn value_at_origin_matches_quadrature() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        let oracle = p.h() * simpson(|s| (-s * s / 4.0).exp(), 0.0, p.omega(), 2000);
        // 40-digit reference: 0.5922965364693265150534610777...
        assert!((oracle - 0.5922965364693265).abs() < 1e-12);
        assert!((p.value(0.0).unwrap() - oracle).abs() < 1e-13);
    }

    #[test]
    fn value_matches_quadrature_for_large_front() {
        let p = SelfSimilarProfile::new(50.0).unwrap();
        for &eta in &[0.0, 1.0, 2.5, 0.9 * p.omega()] {
            let oracle = p.h() * simpson(|s| (-s * s / 4.0).exp(), eta, p.omega(), 4000);
            let got = p.value(eta).unwrap();
            assert!((got - oracle).abs() <= 1e-12 * oracle.max(1.0), "eta={eta}");
        }
    }

    #[test]
    fn one_sided_derivative_at_origin() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        let eps = 1e-7;
        let d = (p.value(eps).unwrap() - p.value(0.0).unwrap()) / eps;
        assert!((d + p.h()).abs() < 1e-6);
    }

    #[test]
    fn slope_boundary_values() {
        for &h in &[0.1, H_UNIT, 3.0] {
            let p = SelfSimilarProfile::new(h).unwrap();
            assert_eq!(p.slope(0.0).unwrap(), -h);
            assert!((p.slope(p.omega()).unwrap() + 0.5 * p.omega()).abs() < 1e-12);
        }
    }

    #[test]
    fn value_and_slope_monotone() {
        let p = SelfSimilarProfile::new(2.0).unwrap();
        let n = 1000;
        let mut prev_v = f64::INFINITY;
        let mut prev_s = f64::INFINITY;
        for i in 0..=n {
            let eta = p.omega() * i as f64 / n as f64;
            let v = p.value(eta).unwrap();
            let s = p.slope(eta).unwrap().abs();
            assert!(v >= 0.0);
            assert!(v < prev_v || (i == n && v == 0.0));
            assert!(s < prev_s);
            prev_v = v;
            prev_s = s;
        }
    }

    #[test]
    fn domain_errors() {
        let p = SelfSimilarProfile::new(1.0).unwrap();
        assert!(p.value(-1e-3).is_err());
        assert!(p.value(p.omega() * 1.001).is_err());
        assert!(p.slope(f64::NAN).is_err());
        assert!(p.physical(-1.0, 0.0).is_err());
        assert!(p.physical(0.0, -1.0).is_err());
    }

    #[test]
    fn ode_residual_is_second_order() {
        // Discrete residual of U'' + (η/2)U' on two grids.
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        let residual = |n: usize| {
            let d = p.omega() / n as f64;
            (1..n)
                .map(|i| {
                    let e = i as f64 * d;
                    let u = |x: f64| p.value(x).unwrap();
                    let upp = (u(e + d) - 2.0 * u(e) + u(e - d)) / (d * d);
                    let up = (u(e + d) - u(e - d)) / (2.0 * d);
                    (upp + 0.5 * e * up).abs()
                })
                .fold(0.0, f64::max)
        };
        let (r1, r2) = (residual(50), residual(100));
        let ratio = r1 / r2;
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
        let c = r1 * 50.0_f64.powi(2) / p.omega().powi(2);
        assert!(r2 <= 1.1 * c * (p.omega() / 100.0).powi(2));
    }

    #[test]
    fn physical_variables() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        assert_eq!(p.physical(p.omega(), 0.0).unwrap(), (0.0, p.omega()));
        assert_eq!(p.physical(0.3, 3.0).unwrap().1, 2.0 * p.omega());
        for &t in &[0.0, 1.0, 10.0, 1e4] {
            assert_eq!(p.physical(0.0, t).unwrap().0, p.value(0.0).unwrap());
        }
        assert_eq!(p.physical(10.0, 0.0).unwrap().0, 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn root_closure(h in 1e-6f64..1e3) {
                let w = solve_omega(h, 1e-12).unwrap();
                prop_assert!((front_map(w, 1.0) - h).abs() <= 1e-12 * h.max(1.0));
            }

            #[test]
            fn root_monotone(a in 1e-4f64..50.0, b in 1e-4f64..50.0) {
                prop_assume!(a < b);
                prop_assert!(solve_omega(a, 1e-12).unwrap() < solve_omega(b, 1e-12).unwrap());
            }
        }
    }
}
