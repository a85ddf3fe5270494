//! Run configuration and the `profile`, `run` and `certify` commands.
//!
//! Configuration files are plain `key=value` lines; `#` starts a comment.
//!
//! | key              | meaning                                        | default |
//! |------------------|------------------------------------------------|---------|
//! | `scenario`       | `self_similar`, `lower`, `upper` or `custom`   | required|
//! | `h`              | flux amplitude                                 | required|
//! | `knots`          | `x0:u0, x1:u1, …` piecewise-linear `u₀`        | ramp    |
//! | `N`              | spatial intervals                              | 400     |
//! | `dtau`           | time step                                      | 1e-4    |
//! | `tau_end`        | final similarity time                          | 10      |
//! | `stride`         | steps between recorded samples                 | 100     |
//! | `coupling_iters` | trapezoidal front corrector passes             | 1       |
//! | `out`            | output path                                    | none    |
//!
//! Without `knots`, the base data is the ramp `u₀(x) = 0.5·(1 − x)⁺`.
//! `lower` and `upper` start from the lower and upper solutions built
//! around the base data; `custom` starts from the base data itself.
//! Commands return their output as strings; the binary does the I/O.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::thread;

use crate::bounds::{build_upper, choose_lambda, InitialData, UpperLinear};
use crate::diagnostics::{
    check_monotone_in_time, check_ordering, energy_bound, energy_window, sup_distance, Direction, Violation,
    ViolationKind, COMMON_GRID_POINTS,
};
use crate::error::{Error, Result};
use crate::similarity::SelfSimilarProfile;
use crate::solver::{run, SimilarityState, SolverConfig, Trajectory};

/// Tolerance of every check performed by `certify`.
pub const CERTIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    SelfSimilar,
    Lower,
    Upper,
    Custom,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "self_similar" => Ok(Scenario::SelfSimilar),
            "lower" => Ok(Scenario::Lower),
            "upper" => Ok(Scenario::Upper),
            "custom" => Ok(Scenario::Custom),
            other => Err(format!("unknown scenario `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub scenario: Scenario,
    pub knots: Option<Vec<(f64, f64)>>,
    pub h: f64,
    pub intervals: usize,
    pub dtau: f64,
    pub tau_end: f64,
    pub stride: usize,
    pub coupling_iters: usize,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn new(scenario: Scenario, h: f64) -> Self {
        Self {
            scenario,
            knots: None,
            h,
            intervals: SolverConfig::DEFAULT_INTERVALS,
            dtau: SolverConfig::DEFAULT_DTAU,
            tau_end: 10.0,
            stride: 100,
            coupling_iters: SolverConfig::DEFAULT_COUPLING_ITERS,
            out: None,
        }
    }

    pub fn with_knots(mut self, knots: &[(f64, f64)]) -> Self {
        self.knots = Some(knots.to_vec());
        self
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            intervals: self.intervals,
            dtau: self.dtau,
            coupling_iters: self.coupling_iters,
            h: self.h,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) || !self.h.is_finite() {
            return Err(Error::Validation("h must be positive".into()));
        }
        self.solver_config().validate()?;
        if !(self.tau_end > 0.0) || !self.tau_end.is_finite() {
            return Err(Error::Validation("tau_end must be positive".into()));
        }
        if self.stride == 0 {
            return Err(Error::Validation("stride must be positive".into()));
        }
        match (self.scenario, &self.knots) {
            (Scenario::Custom, None) => {
                return Err(Error::Validation("scenario custom requires knots".into()));
            }
            (Scenario::SelfSimilar, Some(_)) => {
                return Err(Error::Validation("knots do not apply to scenario self_similar".into()));
            }
            _ => {}
        }
        if let Some(k) = &self.knots {
            InitialData::new(k.clone()).map_err(|e| Error::Validation(e.to_string()))?;
        }
        Ok(())
    }

    /// The data the lower and upper solutions are built around.
    pub fn base_data(&self) -> Result<InitialData> {
        match (&self.knots, self.scenario) {
            (Some(k), _) => InitialData::new(k.clone()),
            (None, Scenario::SelfSimilar) => {
                let p = SelfSimilarProfile::new(self.h)?;
                let n = self.intervals;
                let knots = (0..=n)
                    .map(|i| {
                        let eta = p.omega() * i as f64 / n as f64;
                        (eta, if i == n { 0.0 } else { p.extended(eta) })
                    })
                    .collect();
                InitialData::new(knots)
            }
            (None, _) => InitialData::ramp(0.5, 1.0),
        }
    }

    /// Initial state of the run described by this spec.
    pub fn start_state(&self) -> Result<SimilarityState> {
        let n = self.intervals;
        match self.scenario {
            Scenario::SelfSimilar => SimilarityState::from_profile(&SelfSimilarProfile::new(self.h)?, n),
            Scenario::Lower => SimilarityState::from_lower(&choose_lambda(&self.base_data()?, self.h)?, n),
            Scenario::Upper => SimilarityState::from_upper(&build_upper(&self.base_data()?, self.h)?, n),
            Scenario::Custom => SimilarityState::from_initial(&self.base_data()?, n),
        }
    }

    fn with_scenario(&self, scenario: Scenario) -> Self {
        Self { scenario, ..self.clone() }
    }
}

fn parse_knots(text: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    text.split(',')
        .map(|pair| {
            let (x, u) = pair
                .split_once(':')
                .ok_or_else(|| format!("knot `{}` is not of the form x:u", pair.trim()))?;
            let x = x.trim().parse::<f64>().map_err(|e| format!("knot position: {e}"))?;
            let u = u.trim().parse::<f64>().map_err(|e| format!("knot value: {e}"))?;
            Ok((x, u))
        })
        .collect()
}

fn parse_value<T: FromStr>(value: &str, key: &str, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| Error::Parse { line, message: format!("{key}: {e}") })
}

/// Parses and validates a `key=value` run configuration.
pub fn parse_config(text: &str) -> Result<RunSpec> {
    let mut scenario = None;
    let mut h = None;
    let mut spec = RunSpec::new(Scenario::Custom, 1.0);
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Parse { line, message: format!("expected key=value, got `{content}`") })?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|k| k == key) {
            return Err(Error::Parse { line, message: format!("duplicate key `{key}`") });
        }
        seen.push(key.to_string());
        match key {
            "scenario" => {
                scenario = Some(value.parse::<Scenario>().map_err(|message| Error::Parse { line, message })?)
            }
            "h" => h = Some(parse_value::<f64>(value, key, line)?),
            "N" => spec.intervals = parse_value(value, key, line)?,
            "dtau" => spec.dtau = parse_value(value, key, line)?,
            "tau_end" => spec.tau_end = parse_value(value, key, line)?,
            "stride" => spec.stride = parse_value(value, key, line)?,
            "coupling_iters" => spec.coupling_iters = parse_value(value, key, line)?,
            "knots" => spec.knots = Some(parse_knots(value).map_err(|message| Error::Parse { line, message })?),
            "out" => spec.out = Some(PathBuf::from(value)),
            other => return Err(Error::Parse { line, message: format!("unknown key `{other}`") }),
        }
    }

    spec.scenario = scenario.ok_or_else(|| Error::Validation("missing key `scenario`".into()))?;
    spec.h = h.ok_or_else(|| Error::Validation("missing key `h`".into()))?;
    spec.validate()?;
    Ok(spec)
}

/// Formats `x` with `digits` significant digits, like C's `%.{digits}g`
/// without exponent for moderate magnitudes.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exponent) {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = digits - 1)
    }
}

/// Self-similar front and `points` samples of `U` on `[0, ω]` as CSV.
pub fn cmd_profile(h: f64, points: usize) -> Result<(f64, String)> {
    if points < 2 {
        return Err(Error::Usage("need at least two profile points".into()));
    }
    let p = SelfSimilarProfile::new(h)?;
    let mut csv = String::from("eta,U\n");
    let n = points - 1;
    for i in 0..=n {
        let eta = if i == n { p.omega() } else { p.omega() * i as f64 / n as f64 };
        let _ = writeln!(csv, "{},{}", eta, p.value(eta)?);
    }
    Ok((p.omega(), csv))
}

pub fn trajectory_csv(traj: &Trajectory, p: &SelfSimilarProfile) -> String {
    let mut csv = String::from("tau,b,b_gap,profile_gap,flux0,fluxb\n");
    for s in &traj.samples {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            s.tau(),
            s.b(),
            (s.b() - p.omega()).abs(),
            sup_distance(&s.state, p, COMMON_GRID_POINTS),
            s.flux_origin,
            s.flux_front
        );
    }
    csv
}

pub fn simulate(spec: &RunSpec) -> Result<Trajectory> {
    spec.validate()?;
    run(spec.start_state()?, &spec.solver_config(), spec.tau_end, spec.stride)
}

/// Runs `spec` and renders the trajectory CSV.
pub fn cmd_run(spec: &RunSpec) -> Result<String> {
    let p = SelfSimilarProfile::new(spec.h)?;
    let traj = simulate(spec)?;
    Ok(trajectory_csv(&traj, &p))
}

/// A failed check located in time (and space, for profiles).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckViolation {
    pub check: String,
    pub tau: f64,
    pub eta: Option<f64>,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOutcome {
    pub report: String,
    pub violations: Vec<CheckViolation>,
    pub energy_bound: f64,
    pub max_energy: f64,
}

impl CertifyOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn violations_csv(&self) -> String {
        let mut csv = String::from("check,tau,eta,excess\n");
        for v in &self.violations {
            let eta = v.eta.map(|e| e.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{},{},{},{}", v.check, v.tau, eta, v.excess);
        }
        csv
    }
}

fn located(check: &str, list: Vec<Violation>) -> impl Iterator<Item = CheckViolation> + '_ {
    list.into_iter().map(move |v| CheckViolation {
        check: check.to_string(),
        tau: v.tau,
        eta: match v.kind {
            ViolationKind::Front => None,
            ViolationKind::Profile { eta } => Some(eta),
        },
        excess: v.excess,
    })
}

/// Runs lower, generic and upper trajectories around the base data of
/// `spec` and checks sandwiching, monotonicity, boundedness and the
/// windowed energy bound.
pub fn cmd_certify(spec: &RunSpec) -> Result<CertifyOutcome> {
    spec.validate()?;
    let base = spec.base_data()?;
    let upper: UpperLinear = build_upper(&base, spec.h)?;
    let lower = choose_lambda(&base, spec.h)?;
    let generic = match spec.scenario {
        Scenario::SelfSimilar => spec.clone(),
        _ => spec.with_scenario(Scenario::Custom),
    };
    let specs = [spec.with_scenario(Scenario::Lower), generic, spec.with_scenario(Scenario::Upper)];

    let runs: Vec<Result<Trajectory>> = thread::scope(|scope| {
        let handles: Vec<_> = specs.iter().map(|s| scope.spawn(move || simulate(s))).collect();
        handles.into_iter().map(|h| h.join().expect("simulation thread panicked")).collect()
    });
    let mut runs = runs.into_iter();
    let (low_t, mid_t, up_t) = (runs.next().unwrap()?, runs.next().unwrap()?, runs.next().unwrap()?);

    let tol = CERTIFY_TOL;
    let mut violations: Vec<CheckViolation> = Vec::new();
    let mut report = String::new();
    let mut section = |name: &str, list: Vec<CheckViolation>, violations: &mut Vec<CheckViolation>| {
        let status = if list.is_empty() { "ok" } else { "FAIL" };
        let _ = writeln!(report, "{name:<28} {status:>4}  ({} violations)", list.len());
        violations.extend(list);
    };

    section("order lower<=generic", located("order_lower_generic", check_ordering(&low_t, &mid_t, tol)?).collect(), &mut violations);
    section("order generic<=upper", located("order_generic_upper", check_ordering(&mid_t, &up_t, tol)?).collect(), &mut violations);
    section("order lower<=upper", located("order_lower_upper", check_ordering(&low_t, &up_t, tol)?).collect(), &mut violations);
    section(
        "lower nondecreasing",
        located("monotone_lower", check_monotone_in_time(&low_t, Direction::NonDecreasing, tol)?).collect(),
        &mut violations,
    );
    section(
        "upper nonincreasing",
        located("monotone_upper", check_monotone_in_time(&up_t, Direction::NonIncreasing, tol)?).collect(),
        &mut violations,
    );

    let cap = upper.sup();
    let mut bounded = Vec::new();
    for (name, t) in [("bound_lower", &low_t), ("bound_generic", &mid_t), ("bound_upper", &up_t)] {
        for s in &t.samples {
            if s.sup > cap + tol {
                bounded.push(CheckViolation { check: name.into(), tau: s.tau(), eta: None, excess: s.sup - cap - tol });
            }
        }
    }
    section("values within [0, b_bar^2/2]", bounded, &mut violations);

    let m1 = energy_bound(spec.h, upper.b_bar());
    let mut max_energy = 0.0_f64;
    let mut energy = Vec::new();
    for (name, t) in [("energy_lower", &low_t), ("energy_generic", &mid_t), ("energy_upper", &up_t)] {
        let mut window = t.first().tau().ceil();
        while let Ok(e) = energy_window(t, window) {
            max_energy = max_energy.max(e);
            if e > m1 {
                energy.push(CheckViolation { check: name.into(), tau: window, eta: None, excess: e - m1 });
            }
            window += 1.0;
        }
    }
    section("energy windows <= M1", energy, &mut violations);

    let header = format!(
        "certify h={} N={} dtau={} tau_end={}\nlambda={} b_lambda={} b_bar={}\nmax energy window={} M1={}\n",
        spec.h,
        spec.intervals,
        spec.dtau,
        spec.tau_end,
        lower.lambda(),
        lower.b_lambda(),
        upper.b_bar(),
        max_energy,
        m1
    );
    let verdict = if violations.is_empty() { "PASS" } else { "FAIL" };
    let report = format!("{header}{report}result: {verdict}\n");
    Ok(CertifyOutcome { report, violations, energy_bound: m1, max_energy })
}
