//! Front-fixed finite-difference integration of the similarity system
//!
//! ```text
//! W_τ = W_ηη + (η/2) W_η,   0 < η < b(τ)
//! −W_η(0, τ) = h,  W(b(τ), τ) = 0,  ḃ + b/2 = −W_η(b, τ)
//! ```
//!
//! With `η = ξ·b(τ)` and `V(ξ, τ) = W(ξ·b, τ)` the moving interval maps to
//! `[0, 1]` and the equation becomes
//!
//! ```text
//! V_τ = V_ξξ / b² + ξ·(ḃ/b + 1/2)·V_ξ
//! ```
//!
//! which is advanced on a uniform `ξ` grid with implicit central
//! differences and a lagged front velocity, optionally corrected by a
//! trapezoidal predictor-corrector on the front coupling.

use crate::bounds::{InitialData, StationaryPerturbed, UpperLinear};
use crate::error::{Error, Result};
use crate::similarity::SelfSimilarProfile;
use crate::tridiag;

/// `W` sampled at `ξ_i = i/N` of the fixed domain, `η_i = ξ_i·b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityState {
    tau: f64,
    b: f64,
    values: Vec<f64>,
}

impl SimilarityState {
    /// Validates `b > 0`, at least three intervals, nonnegative values and
    /// a zero Dirichlet node at the front.
    pub fn new(tau: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::State(format!("front must be positive, got {b}")));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::State(format!("tau must be nonnegative, got {tau}")));
        }
        if values.len() < 4 {
            return Err(Error::State(format!("need at least 3 intervals, got {}", values.len().saturating_sub(1))));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::State("values must be finite and nonnegative".into()));
        }
        if values[values.len() - 1] != 0.0 {
            return Err(Error::State("front node must be 0".into()));
        }
        Ok(Self { tau, b, values })
    }

    /// Samples `f(η)` at the grid nodes; negative samples are clamped to
    /// zero and the front node is forced to zero.
    pub fn from_fn(tau: f64, b: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = intervals;
        let mut values: Vec<f64> = (0..=n).map(|i| f(b * i as f64 / n as f64).max(0.0)).collect();
        if let Some(last) = values.last_mut() {
            *last = 0.0;
        }
        Self::new(tau, b, values)
    }

    pub fn from_initial(init: &InitialData, intervals: usize) -> Result<Self> {
        Self::from_fn(0.0, init.b0(), intervals, |x| init.value(x))
    }

    pub fn from_profile(p: &SelfSimilarProfile, intervals: usize) -> Result<Self> {
        Self::from_fn(0.0, p.omega(), intervals, |e| p.extended(e))
    }

    pub fn from_lower(s: &StationaryPerturbed, intervals: usize) -> Result<Self> {
        Self::from_fn(0.0, s.b_lambda(), intervals, |e| s.extended(e))
    }

    pub fn from_upper(u: &UpperLinear, intervals: usize) -> Result<Self> {
        Self::from_fn(0.0, u.b_bar(), intervals, |e| u.value(e))
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn dxi(&self) -> f64 {
        1.0 / self.intervals() as f64
    }

    /// `η_i = ξ_i·b`.
    pub fn eta(&self, i: usize) -> f64 {
        self.b * i as f64 / self.intervals() as f64
    }

    /// Piecewise-linear `W(η)`, continued by zero for `η ≥ b`.
    pub fn value_at(&self, eta: f64) -> f64 {
        if eta >= self.b {
            return 0.0;
        }
        let n = self.intervals();
        let s = (eta.max(0.0) / self.b) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        let frac = s - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    /// Re-grids onto `intervals` nodes by linear interpolation.
    pub fn resample(&self, intervals: usize) -> Result<Self> {
        if intervals == self.intervals() {
            return Ok(self.clone());
        }
        Self::from_fn(self.tau, self.b, intervals, |e| self.value_at(e))
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    /// `W_η(0)` by the second-order one-sided difference.
    pub fn slope_at_origin(&self) -> f64 {
        let v = &self.values;
        (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * self.dxi() * self.b)
    }

    /// `W_η(b)` by the second-order one-sided difference.
    pub fn slope_at_front(&self) -> f64 {
        let v = &self.values;
        let n = self.intervals();
        (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * self.dxi() * self.b)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Numerical parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Number of spatial intervals `N` on `[0, 1]`.
    pub intervals: usize,
    pub dtau: f64,
    /// Trapezoidal corrector passes per step; 0 gives the plain lagged scheme.
    pub coupling_iters: usize,
    /// Neumann flux amplitude `h`.
    pub h: f64,
}

impl SolverConfig {
    pub const DEFAULT_INTERVALS: usize = 400;
    pub const DEFAULT_DTAU: f64 = 1e-4;
    pub const DEFAULT_COUPLING_ITERS: usize = 1;

    pub fn new(h: f64) -> Self {
        Self {
            intervals: Self::DEFAULT_INTERVALS,
            dtau: Self::DEFAULT_DTAU,
            coupling_iters: Self::DEFAULT_COUPLING_ITERS,
            h,
        }
    }

    pub fn with_intervals(mut self, n: usize) -> Self {
        self.intervals = n;
        self
    }

    pub fn with_dtau(mut self, dtau: f64) -> Self {
        self.dtau = dtau;
        self
    }

    pub fn with_coupling_iters(mut self, k: usize) -> Self {
        self.coupling_iters = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.intervals < 8 {
            return Err(Error::Validation(format!("N must be at least 8, got {}", self.intervals)));
        }
        if !(self.dtau > 0.0) || !self.dtau.is_finite() {
            return Err(Error::Validation(format!("dtau must be positive, got {}", self.dtau)));
        }
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::Validation("h must be positive".into()));
        }
        Ok(())
    }
}

/// Coefficients of `V_τ = D·V_ξξ + a(ξ)·V_ξ` for a frozen front.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontFixedCoefficients {
    /// `D = 1/b²`, uniform in `ξ`.
    pub diffusion: f64,
    /// `a_i = ξ_i·(ḃ/b + 1/2)`.
    pub advection: Vec<f64>,
}

impl FrontFixedCoefficients {
    /// Spatial operator `D·V_ξξ + a·V_ξ` at the interior nodes (central
    /// differences); entries 0 and N are left at zero.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        let n = values.len() - 1;
        let dxi = 1.0 / n as f64;
        let mut out = vec![0.0; n + 1];
        for i in 1..n {
            let vxx = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (dxi * dxi);
            let vx = (values[i + 1] - values[i - 1]) / (2.0 * dxi);
            out[i] = self.diffusion * vxx + self.advection[i] * vx;
        }
        out
    }
}

fn coefficients(b: f64, bdot: f64, intervals: usize) -> Result<FrontFixedCoefficients> {
    if !(b > 0.0) {
        return Err(Error::State(format!("front must be positive, got {b}")));
    }
    let rate = bdot / b + 0.5;
    let advection = (0..=intervals).map(|i| rate * i as f64 / intervals as f64).collect();
    Ok(FrontFixedCoefficients { diffusion: 1.0 / (b * b), advection })
}

pub fn front_fixed_coefficients(state: &SimilarityState, bdot: f64) -> Result<FrontFixedCoefficients> {
    coefficients(state.b, bdot, state.intervals())
}

fn velocity(values: &[f64], b: f64) -> f64 {
    let n = values.len() - 1;
    let dxi = 1.0 / n as f64;
    let slope = (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * dxi * b);
    -slope - 0.5 * b
}

/// Front velocity `ḃ = −W_η(b) − b/2` with a second-order one-sided slope.
pub fn stefan_velocity(state: &SimilarityState) -> f64 {
    velocity(&state.values, state.b)
}

/// One implicit solve of the front-fixed equation from `prev` with
/// coefficients frozen at `(b, bdot)`.
fn implicit_solve(prev: &[f64], b: f64, bdot: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let n = prev.len() - 1;
    let dxi = 1.0 / n as f64;
    let coef = coefficients(b, bdot, n)?;
    let r = cfg.dtau * coef.diffusion / (dxi * dxi);

    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = prev[..n].to_vec();

    // Ghost node V_{-1} = V_1 + 2Δξ·h·b from V_ξ(0) = −h·b; advection vanishes at ξ = 0.
    diag[0] = 1.0 + 2.0 * r;
    upper[0] = -2.0 * r;
    rhs[0] += 2.0 * r * dxi * cfg.h * b;

    for i in 1..n {
        let adv = cfg.dtau * coef.advection[i] / (2.0 * dxi);
        lower[i] = -(r - adv);
        diag[i] = 1.0 + 2.0 * r;
        upper[i] = -(r + adv);
    }
    // V_N = 0 drops the last super-diagonal entry.
    upper[n - 1] = 0.0;

    tridiag::solve_in_place(&lower, &diag, &upper, &mut rhs)?;
    rhs.push(0.0);
    for v in rhs.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(rhs)
}

/// Advances `state` by one step of size `cfg.dtau`.
pub fn step(state: &SimilarityState, cfg: &SolverConfig) -> Result<SimilarityState> {
    let b0 = state.b;
    let tau = state.tau + cfg.dtau;
    let bdot0 = stefan_velocity(state);

    let mut values = implicit_solve(&state.values, b0, bdot0, cfg)?;
    let mut b1 = b0 + cfg.dtau * bdot0;
    check_front(b1, tau)?;

    for _ in 0..cfg.coupling_iters {
        let bdot1 = velocity(&values, b1);
        let bdot_avg = 0.5 * (bdot0 + bdot1);
        b1 = b0 + cfg.dtau * bdot_avg;
        check_front(b1, tau)?;
        values = implicit_solve(&state.values, 0.5 * (b0 + b1), bdot_avg, cfg)?;
    }

    Ok(SimilarityState { tau, b: b1, values })
}

fn check_front(b: f64, tau: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::FrontCollapse { tau, b });
    }
    Ok(())
}

/// Recorded state together with its boundary diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub state: SimilarityState,
    /// Front velocity `ḃ` at this state.
    pub velocity: f64,
    /// `−W_η(0)`.
    pub flux_origin: f64,
    /// `−W_η(b)`.
    pub flux_front: f64,
    /// `max_η W`.
    pub sup: f64,
}

impl Sample {
    pub fn new(state: SimilarityState) -> Self {
        Self {
            velocity: stefan_velocity(&state),
            flux_origin: -state.slope_at_origin(),
            flux_front: -state.slope_at_front(),
            sup: state.sup(),
            state,
        }
    }

    pub fn tau(&self) -> f64 {
        self.state.tau
    }

    pub fn b(&self) -> f64 {
        self.state.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub stride: usize,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    /// Wraps pre-built samples; `tau` must strictly increase.
    pub fn from_samples(stride: usize, samples: Vec<Sample>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].tau() > w[0].tau())) {
            return Err(Error::Usage("sample times must strictly increase".into()));
        }
        Ok(Self { stride, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    /// The recorded sample closest to `tau`.
    pub fn nearest(&self, tau: f64) -> &Sample {
        self.samples
            .iter()
            .min_by(|a, b| (a.tau() - tau).abs().total_cmp(&(b.tau() - tau).abs()))
            .expect("empty trajectory")
    }
}

/// Starting point of a run.
#[derive(Debug, Clone)]
pub enum Initial {
    Data(InitialData),
    State(SimilarityState),
}

impl From<InitialData> for Initial {
    fn from(d: InitialData) -> Self {
        Initial::Data(d)
    }
}

impl From<SimilarityState> for Initial {
    fn from(s: SimilarityState) -> Self {
        Initial::State(s)
    }
}

/// Integrates from `init` until `tau ≥ tau_end`, recording the initial
/// state, every `stride`-th step and the final state.
pub fn run(init: impl Into<Initial>, cfg: &SolverConfig, tau_end: f64, stride: usize) -> Result<Trajectory> {
    cfg.validate()?;
    if !(tau_end > 0.0) || !tau_end.is_finite() {
        return Err(Error::Usage(format!("tau_end must be positive, got {tau_end}")));
    }
    if stride == 0 {
        return Err(Error::Usage("stride must be positive".into()));
    }
    let start = match init.into() {
        Initial::Data(d) => SimilarityState::from_initial(&d, cfg.intervals)?,
        Initial::State(s) => s.resample(cfg.intervals)?,
    };
    let tau0 = start.tau;
    let steps = ((tau_end - tau0) / cfg.dtau - 1e-9).ceil().max(0.0) as usize;

    let mut samples = Vec::with_capacity(steps / stride + 2);
    let mut state = start;
    samples.push(Sample::new(state.clone()));
    for k in 1..=steps {
        // Multiply rather than accumulate so sample times are reproducible.
        state = step(&state, cfg)?.with_tau(tau0 + k as f64 * cfg.dtau);
        if k % stride == 0 || k == steps {
            samples.push(Sample::new(state.clone()));
        }
    }
    Ok(Trajectory { stride, samples })
}
