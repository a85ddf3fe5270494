//! Change of variables between physical `(x, t)` and similarity `(η, τ)`:
//! `η = x/√(t+1)`, `τ = ln(t+1)`, `b = s/√(t+1)`, `W(η, τ) = u(x, t)`.

use crate::error::{Error, Result};
use crate::solver::SimilarityState;

/// Samples of the physical temperature `u(·, t)` on `[0, s]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    pub t: f64,
    pub s: f64,
    /// Increasing positions, `x[0] = 0`, `x[last] = s`.
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

impl PhysicalState {
    pub fn new(t: f64, s: f64, x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::State(format!("t must be nonnegative, got {t}")));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::State(format!("front must be positive, got {s}")));
        }
        if x.len() != u.len() || x.len() < 4 {
            return Err(Error::State("need matching x/u with at least 4 samples".into()));
        }
        if x[0] != 0.0 || x[x.len() - 1] != s || x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::State("positions must increase from 0 to s".into()));
        }
        if u.iter().any(|v| !(*v >= 0.0)) || u[u.len() - 1] != 0.0 {
            return Err(Error::State("u must be nonnegative and vanish at the front".into()));
        }
        Ok(Self { t, s, x, u })
    }

    /// Piecewise-linear `u(x)`, zero past the front.
    pub fn value_at(&self, x: f64) -> f64 {
        if x >= self.s {
            return 0.0;
        }
        if x <= 0.0 {
            return self.u[0];
        }
        let k = self.x.partition_point(|&p| p <= x);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        self.u[k - 1] + (self.u[k] - self.u[k - 1]) * (x - x0) / (x1 - x0)
    }
}

/// Maps to similarity variables on a grid with one interval per sample gap.
pub fn to_similarity(ps: &PhysicalState) -> Result<SimilarityState> {
    to_similarity_on(ps, ps.x.len() - 1)
}

/// Maps to similarity variables, resampling onto `intervals` uniform
/// `ξ` intervals by linear interpolation.
pub fn to_similarity_on(ps: &PhysicalState, intervals: usize) -> Result<SimilarityState> {
    let scale = (ps.t + 1.0).sqrt();
    let tau = ps.t.ln_1p();
    let b = ps.s / scale;
    // η_i = ξ_i·b corresponds to x = ξ_i·s.
    SimilarityState::from_fn(tau, b, intervals, |eta| ps.value_at(eta * scale))
}

pub fn to_physical(ss: &SimilarityState) -> PhysicalState {
    let t = ss.tau().exp_m1();
    let scale = (t + 1.0).sqrt();
    let s = ss.b() * scale;
    let n = ss.intervals();
    let mut x: Vec<f64> = (0..=n).map(|i| s * i as f64 / n as f64).collect();
    x[n] = s;
    PhysicalState { t, s, x, u: ss.values().to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::SelfSimilarProfile;

    const H_UNIT: f64 = 0.6420127083438707;

    fn ramp_physical(t: f64, s: f64, n: usize) -> PhysicalState {
        let x: Vec<f64> = (0..=n).map(|i| s * i as f64 / n as f64).collect();
        let u = x.iter().map(|&x| 0.5 * (s - x).max(0.0)).collect();
        PhysicalState::new(t, s, x, u).unwrap()
    }

    #[test]
    fn time_maps() {
        let ss = to_similarity(&ramp_physical(0.0, 1.3, 16)).unwrap();
        assert_eq!(ss.tau(), 0.0);
        assert_eq!(ss.b(), 1.3);
        let ss = to_similarity(&ramp_physical(std::f64::consts::E - 1.0, 1.0, 16)).unwrap();
        assert!((ss.tau() - 1.0).abs() < 1e-15);
        let back = to_physical(&SimilarityState::new(0.0, 0.7, vec![1.0, 0.5, 0.2, 0.0]).unwrap());
        assert_eq!((back.t, back.s), (0.0, 0.7));
    }

    #[test]
    fn self_similar_front_at_ln4() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        let ss = SimilarityState::from_profile(&p, 64).unwrap().with_tau(4.0_f64.ln());
        let ps = to_physical(&ss);
        assert!((ps.t - 3.0).abs() < 1e-14);
        assert!((ps.s - 2.0 * p.omega()).abs() < 1e-14);
    }

    #[test]
    fn physical_flux_decays() {
        let p = SelfSimilarProfile::new(H_UNIT).unwrap();
        for &tau in &[0.0, 1.0, 3.0] {
            let ss = SimilarityState::from_profile(&p, 2000).unwrap().with_tau(tau);
            let ps = to_physical(&ss);
            let dx = ps.x[1];
            let ux0 = (-3.0 * ps.u[0] + 4.0 * ps.u[1] - ps.u[2]) / (2.0 * dx);
            let want = H_UNIT / (ps.t + 1.0).sqrt();
            assert!((-ux0 - want).abs() < 1e-6 * want, "tau={tau}");
        }
    }

    #[test]
    fn round_trip_is_identity_up_to_rounding() {
        let ps = ramp_physical(2.5, 1.7, 400);
        let back = to_physical(&to_similarity(&ps).unwrap());
        assert!((back.t - ps.t).abs() <= 4.0 * f64::EPSILON * ps.t);
        assert!((back.s - ps.s).abs() <= 4.0 * f64::EPSILON * ps.s);
        for (a, b) in back.u.iter().zip(&ps.u) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_interpolation_error_is_second_order() {
        // Resampling a smooth profile through a coarser ξ grid and back.
        let err = |n: usize| {
            let s = 1.5;
            let x: Vec<f64> = (0..=4000).map(|i| s * i as f64 / 4000.0).collect();
            let u: Vec<f64> = x.iter().map(|&x| (s * s - x * x) * 0.3).collect();
            let ps = PhysicalState::new(1.0, s, x, u).unwrap();
            let back = to_physical(&to_similarity_on(&ps, n).unwrap());
            ps.x.iter().map(|&x| (back.value_at(x) - ps.value_at(x)).abs()).fold(0.0, f64::max)
        };
        let ratio = err(50) / err(100);
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn validation() {
        assert!(PhysicalState::new(-1.0, 1.0, vec![0.0, 0.3, 0.6, 1.0], vec![1.0, 0.5, 0.2, 0.0]).is_err());
        assert!(PhysicalState::new(0.0, 1.0, vec![0.0, 0.3, 0.6, 0.9], vec![1.0, 0.5, 0.2, 0.0]).is_err());
        assert!(PhysicalState::new(0.0, 1.0, vec![0.0, 0.3, 0.6, 1.0], vec![1.0, 0.5, 0.2, 0.1]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tau_monotone_and_positive_fronts(t1 in 0.0f64..1e4, t2 in 0.0f64..1e4, s in 0.01f64..10.0) {
                prop_assume!(t1 < t2);
                let a = to_similarity(&ramp_physical(t1, s, 8)).unwrap();
                let b = to_similarity(&ramp_physical(t2, s, 8)).unwrap();
                prop_assert!(a.tau() < b.tau());
                prop_assert!(a.b() > 0.0 && b.b() > 0.0);
                let back = to_physical(&a);
                // expm1∘ln1p amplifies the rounding of ln1p by ln(1+t).
                let ulps = 4.0 * f64::EPSILON * (1.0 + t1) * t1.ln_1p().max(1.0);
                prop_assert!((back.t - t1).abs() <= ulps);
                prop_assert!((back.s - s).abs() <= 4.0 * f64::EPSILON * s);
            }
        }
    }
}
