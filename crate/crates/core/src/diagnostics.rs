//! Measurements on computed trajectories: distance to the self-similar
//! profile, ordering between runs, monotonicity in time and the windowed
//! gradient energy `∫_T^{T+1} ∫_0^{b(τ)} W_η² dη dτ`.
//!
//! Profiles with different fronts are compared after continuing each by
//! zero past its front, on a uniform grid covering both supports.

use std::fmt;

use crate::error::{Error, Result};
use crate::similarity::SelfSimilarProfile;
use crate::solver::{SimilarityState, Trajectory};

/// Points of the shared comparison grid.
pub const COMMON_GRID_POINTS: usize = 2001;

/// Relative slack when matching sample times of two trajectories.
const TAU_MATCH: f64 = 1e-9;

pub fn extend_by_zero(state: &SimilarityState, eta: f64) -> f64 {
    state.value_at(eta)
}

/// `max |W̃(η) − Ũ(η)|` over `grid_points` uniform points on
/// `[0, max(b, ω)]`.
pub fn sup_distance(state: &SimilarityState, p: &SelfSimilarProfile, grid_points: usize) -> f64 {
    let top = state.b().max(p.omega());
    let n = grid_points.max(2) - 1;
    (0..=n)
        .map(|i| {
            let eta = top * i as f64 / n as f64;
            (state.value_at(eta) - p.extended(eta)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    /// Fronts out of order.
    Front,
    /// Zero-extended profiles out of order at `eta` (worst point of the sample).
    Profile { eta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub tau: f64,
    pub kind: ViolationKind,
    /// Amount by which the inequality fails, beyond the tolerance.
    pub excess: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Front => write!(f, "tau={} front excess={:e}", self.tau, self.excess),
            ViolationKind::Profile { eta } => {
                write!(f, "tau={} profile at eta={} excess={:e}", self.tau, eta, self.excess)
            }
        }
    }
}

/// Checks `below ≤ above + tol` for one pair of states; records at most
/// one profile violation, the worst grid point.
fn compare_states(below: &SimilarityState, above: &SimilarityState, tau: f64, tol: f64, out: &mut Vec<Violation>) {
    let gap = below.b() - above.b();
    if gap > tol {
        out.push(Violation { tau, kind: ViolationKind::Front, excess: gap - tol });
    }
    let top = below.b().max(above.b());
    let n = COMMON_GRID_POINTS - 1;
    let mut worst: Option<(f64, f64)> = None;
    for i in 0..=n {
        let eta = top * i as f64 / n as f64;
        let d = below.value_at(eta) - above.value_at(eta);
        if d > tol && worst.is_none_or(|(_, w)| d > w) {
            worst = Some((eta, d));
        }
    }
    if let Some((eta, d)) = worst {
        out.push(Violation { tau, kind: ViolationKind::Profile { eta }, excess: d - tol });
    }
}

/// Verifies `lower ≤ upper` (fronts and zero-extended profiles) at every
/// shared sample time.
pub fn check_ordering(lower: &Trajectory, upper: &Trajectory, tol: f64) -> Result<Vec<Violation>> {
    if lower.len() != upper.len() {
        return Err(Error::Usage(format!(
            "trajectories have {} and {} samples",
            lower.len(),
            upper.len()
        )));
    }
    let mut out = Vec::new();
    for (a, b) in lower.samples.iter().zip(&upper.samples) {
        if (a.tau() - b.tau()).abs() > TAU_MATCH * a.tau().abs().max(1.0) {
            return Err(Error::Usage(format!("sample times differ: {} vs {}", a.tau(), b.tau())));
        }
        compare_states(&a.state, &b.state, a.tau(), tol, &mut out);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    NonDecreasing,
    NonIncreasing,
}

/// Checks consecutive samples move in `direction`, for the front and the
/// zero-extended profile pointwise.
pub fn check_monotone_in_time(traj: &Trajectory, direction: Direction, tol: f64) -> Result<Vec<Violation>> {
    if traj.len() < 2 {
        return Err(Error::Usage("need at least two samples".into()));
    }
    let mut out = Vec::new();
    for w in traj.samples.windows(2) {
        let (prev, next) = (&w[0].state, &w[1].state);
        match direction {
            Direction::NonDecreasing => compare_states(prev, next, w[1].tau(), tol, &mut out),
            Direction::NonIncreasing => compare_states(next, prev, w[1].tau(), tol, &mut out),
        }
    }
    Ok(out)
}

/// `∫_0^b W_η² dη` by the trapezoidal rule, with `W_η` from centered
/// differences inside and second-order one-sided differences at the ends.
pub fn gradient_energy(state: &SimilarityState) -> f64 {
    let v = state.values();
    let n = state.intervals();
    let d = state.b() / n as f64;
    let slope = |i: usize| {
        if i == 0 {
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * d)
        } else if i == n {
            (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * d)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * d)
        }
    };
    let mut sum = 0.5 * (slope(0).powi(2) + slope(n).powi(2));
    for i in 1..n {
        sum += slope(i).powi(2);
    }
    sum * d
}

/// Trapezoidal approximation of `∫_T^{T+1} ∫_0^{b(τ)} W_η² dη dτ` over
/// the recorded samples, linear in `τ` between samples.
pub fn energy_window(traj: &Trajectory, start: f64) -> Result<f64> {
    let end = start + 1.0;
    let slack = TAU_MATCH * end.max(1.0);
    if traj.is_empty() || traj.first().tau() > start + slack || traj.last().tau() < end - slack {
        return Err(Error::Usage(format!("trajectory does not cover [{start}, {end}]")));
    }
    let mut total = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for s in &traj.samples {
        let point = (s.tau(), gradient_energy(&s.state));
        if let Some((t0, e0)) = prev {
            let (t1, e1) = point;
            let lo = t0.max(start);
            let hi = t1.min(end);
            if hi > lo {
                let at = |t: f64| e0 + (e1 - e0) * (t - t0) / (t1 - t0);
                total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
            }
        }
        prev = Some(point);
    }
    Ok(total)
}

/// Energy bound `M₁ = h·b̄²/2 + b̄⁵/8`.
pub fn energy_bound(h: f64, b_bar: f64) -> f64 {
    0.5 * h * b_bar * b_bar + b_bar.powi(5) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub tau: f64,
    pub b_gap: f64,
    pub profile_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceReport {
    pub records: Vec<ConvergenceRecord>,
    /// `(T, energy_window(T))` for every integer `T` covered by the run.
    pub energy_windows: Vec<(f64, f64)>,
    pub ordering_violations: Vec<Violation>,
}

impl ConvergenceReport {
    pub fn from_trajectory(traj: &Trajectory, p: &SelfSimilarProfile) -> Self {
        let records = traj
            .samples
            .iter()
            .map(|s| ConvergenceRecord {
                tau: s.tau(),
                b_gap: (s.b() - p.omega()).abs(),
                profile_gap: sup_distance(&s.state, p, COMMON_GRID_POINTS),
            })
            .collect();
        let mut energy_windows = Vec::new();
        if !traj.is_empty() {
            let mut t = traj.first().tau().ceil();
            while let Ok(e) = energy_window(traj, t) {
                energy_windows.push((t, e));
                t += 1.0;
            }
        }
        Self { records, energy_windows, ordering_violations: Vec::new() }
    }

    pub fn nearest(&self, tau: f64) -> Option<&ConvergenceRecord> {
        self.records.iter().min_by(|a, b| (a.tau - tau).abs().total_cmp(&(b.tau - tau).abs()))
    }
}
