//! Time-independent lower and upper solutions, and the admissible initial
//! data they bracket.
//!
//! Lower solutions come from the perturbed stationary problem
//! `W″ + (λη/2)W′ = 0`, `−W′(0) = h̃`, `W(b_λ) = 0`, `b_λ/2 = −W′(b_λ)`,
//! whose solution `U_λ(η) = h̃·∫_η^{b_λ} exp(−λs²/4) ds` is a lower
//! solution of the similarity system whenever `λ > 1` and `h̃ ≤ h`.
//! Upper solutions are straight lines `W̄(η) = (b̄/2)(b̄ − η)` with
//! `b̄ ≥ max(b₀, 2h, √(2Mb₀))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::{front_map, solve_front};
use crate::special::erf_diff;

/// Piecewise-linear initial temperature `u₀` on `[0, b₀]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    knots: Vec<(f64, f64)>,
    lipschitz: f64,
}

impl InitialData {
    /// Validates knots `(position, value)`.
    ///
    /// The first knot must sit at 0 with a positive value, positions must
    /// strictly increase, values must be nonnegative and the last knot
    /// must be `(b₀, 0)`. The Lipschitz constant is the largest chord slope.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Admissibility("need at least two knots".into()));
        }
        if knots.iter().any(|&(x, u)| !x.is_finite() || !u.is_finite()) {
            return Err(Error::Admissibility("knots must be finite".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::Admissibility(format!("first knot must be at 0, got {}", knots[0].0)));
        }
        if !(knots[0].1 > 0.0) {
            return Err(Error::Admissibility(format!("u0(0) must be positive, got {}", knots[0].1)));
        }
        let (b0, last) = knots[knots.len() - 1];
        if last != 0.0 {
            return Err(Error::Admissibility(format!("u0 must vanish at the front, got {last}")));
        }
        if !(b0 > 0.0) {
            return Err(Error::Admissibility("front b0 must be positive".into()));
        }
        let mut lipschitz = 0.0_f64;
        for w in knots.windows(2) {
            let ((x0, u0), (x1, u1)) = (w[0], w[1]);
            if !(x1 > x0) {
                return Err(Error::Admissibility(format!("knot positions not increasing at {x1}")));
            }
            if u0 < 0.0 || u1 < 0.0 {
                return Err(Error::Admissibility("u0 must be nonnegative".into()));
            }
            lipschitz = lipschitz.max(((u1 - u0) / (x1 - x0)).abs());
        }
        Ok(Self { knots, lipschitz })
    }

    /// `u₀(x) = amplitude·(b₀ − x)⁺`.
    pub fn ramp(amplitude: f64, b0: f64) -> Result<Self> {
        Self::new(vec![(0.0, amplitude * b0), (b0, 0.0)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn b0(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    /// Lipschitz constant `M`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn value_at_origin(&self) -> f64 {
        self.knots[0].1
    }

    /// `u₀(x)`, zero beyond `b₀`.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.knots[0].1;
        }
        if x >= self.b0() {
            return 0.0;
        }
        let k = self.knots.partition_point(|&(p, _)| p <= x);
        let (x0, u0) = self.knots[k - 1];
        let (x1, u1) = self.knots[k];
        u0 + (u1 - u0) * (x - x0) / (x1 - x0)
    }
}

/// Solves `(b/2)·exp(λb²/4) = h̃` for the perturbed front `b_λ`.
pub fn solve_b_lambda(h_tilde: f64, lambda: f64, tol: f64) -> Result<f64> {
    if !(h_tilde > 0.0) {
        return Err(Error::Domain(format!("h_tilde must be positive, got {h_tilde}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let b = solve_front(h_tilde, lambda)?;
    let residual = (front_map(b, lambda) - h_tilde).abs();
    if residual > tol {
        return Err(Error::Convergence(format!("residual {residual:e} exceeds {tol:e}")));
    }
    Ok(b)
}

/// Solution `(U_λ, b_λ)` of the perturbed stationary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPerturbed {
    lambda: f64,
    h_tilde: f64,
    b_lambda: f64,
}

impl StationaryPerturbed {
    pub fn new(h_tilde: f64, lambda: f64) -> Result<Self> {
        let b_lambda = solve_b_lambda(h_tilde, lambda, 1e-12 * h_tilde.max(1.0))?;
        Ok(Self { lambda, h_tilde, b_lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h_tilde(&self) -> f64 {
        self.h_tilde
    }

    pub fn b_lambda(&self) -> f64 {
        self.b_lambda
    }

    /// Whether `(U_λ, b_λ)` is a lower solution for flux `h`.
    pub fn is_lower_for(&self, h: f64) -> bool {
        self.lambda > 1.0 && self.h_tilde <= h
    }

    /// `U_λ(η)` on `[0, b_λ]`.
    pub fn value(&self, eta: f64) -> Result<f64> {
        if eta.is_nan() || eta < 0.0 || eta > self.b_lambda {
            return Err(Error::Domain(format!("eta = {eta} outside [0, {}]", self.b_lambda)));
        }
        Ok(self.value_unchecked(eta))
    }

    fn value_unchecked(&self, eta: f64) -> f64 {
        if eta >= self.b_lambda {
            return 0.0;
        }
        if self.lambda == 0.0 {
            return self.h_tilde * (self.b_lambda - eta);
        }
        let s = self.lambda.sqrt();
        let v = self.h_tilde * (PI / self.lambda).sqrt() * erf_diff(0.5 * s * eta, 0.5 * s * self.b_lambda);
        v.max(0.0)
    }

    /// Zero extension of `U_λ` to `η ≥ 0`.
    pub fn extended(&self, eta: f64) -> f64 {
        self.value_unchecked(eta.max(0.0))
    }

    /// `U_λ′(η) = −h̃·exp(−λη²/4)`.
    pub fn slope(&self, eta: f64) -> f64 {
        -self.h_tilde * (-0.25 * self.lambda * eta * eta).exp()
    }
}

pub fn perturbed_value(s: &StationaryPerturbed, eta: f64) -> Result<f64> {
    s.value(eta)
}

/// Linear upper solution `W̄(η) = (b̄/2)(b̄ − η)⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperLinear {
    b_bar: f64,
}

impl UpperLinear {
    pub fn new(b_bar: f64) -> Result<Self> {
        if !(b_bar > 0.0) || !b_bar.is_finite() {
            return Err(Error::Domain(format!("b_bar must be positive, got {b_bar}")));
        }
        Ok(Self { b_bar })
    }

    pub fn b_bar(&self) -> f64 {
        self.b_bar
    }

    pub fn slope(&self) -> f64 {
        -0.5 * self.b_bar
    }

    pub fn value(&self, eta: f64) -> f64 {
        if eta >= self.b_bar {
            0.0
        } else {
            0.5 * self.b_bar * (self.b_bar - eta.max(0.0))
        }
    }

    /// Upper bound `b̄²/2` on every sandwiched solution.
    pub fn sup(&self) -> f64 {
        0.5 * self.b_bar * self.b_bar
    }
}

const MAX_DOUBLINGS: usize = 200;

/// Picks `λ > 1` so that `U_λ` with `h̃ = h` lies below `u₀`.
///
/// Starting from `λ = 2`, doubles `λ` until `b_λ < b₀`,
/// `b_λ < u₀(0)/M` (dropped when `M = 0`) and `U_λ(0) < u₀(0)`.
pub fn choose_lambda(init: &InitialData, h: f64) -> Result<StationaryPerturbed> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("flux h must be positive, got {h}")));
    }
    let u00 = init.value_at_origin();
    if !(u00 > 0.0) {
        return Err(Error::Admissibility(format!("u0(0) must be positive, got {u00}")));
    }
    let b0 = init.b0();
    let m = init.lipschitz();
    let mut lambda = 2.0;
    for _ in 0..MAX_DOUBLINGS {
        let s = StationaryPerturbed::new(h, lambda)?;
        let b = s.b_lambda();
        let slope_ok = m == 0.0 || b < u00 / m;
        if b < b0 && slope_ok && s.value_unchecked(0.0) < u00 {
            return Ok(s);
        }
        lambda *= 2.0;
    }
    Err(Error::Convergence(format!("no admissible lambda below 2^{MAX_DOUBLINGS}")))
}

/// `b̄ = max(b₀, 2h, √(2Mb₀))`.
pub fn build_upper(init: &InitialData, h: f64) -> Result<UpperLinear> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("flux h must be positive, got {h}")));
    }
    let b0 = init.b0();
    let b_bar = b0.max(2.0 * h).max((2.0 * init.lipschitz() * b0).sqrt());
    UpperLinear::new(b_bar)
}
