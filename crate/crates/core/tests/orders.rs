//! Observed convergence orders of the front-fixed scheme.

use selfsim_stefan::bounds::InitialData;
use selfsim_stefan::diagnostics::{sup_distance, COMMON_GRID_POINTS};
use selfsim_stefan::similarity::SelfSimilarProfile;
use selfsim_stefan::solver::{run, SimilarityState, SolverConfig};

const H_UNIT: f64 = 0.6420127083438707;

fn front_at(dtau: f64, coupling_iters: usize) -> f64 {
    let cfg = SolverConfig::new(H_UNIT).with_intervals(100).with_dtau(dtau).with_coupling_iters(coupling_iters);
    let data = InitialData::ramp(0.5, 1.0).unwrap();
    run(data, &cfg, 0.5, 1_000_000).unwrap().last().b()
}

fn temporal_order(coupling_iters: usize) -> f64 {
    let [a, b, c] = [4e-3, 2e-3, 1e-3].map(|dt| front_at(dt, coupling_iters));
    ((a - b) / (b - c)).abs().log2()
}

#[test]
fn lagged_front_is_first_order_in_time() {
    let order = temporal_order(0);
    assert!((order - 1.0).abs() <= 0.3, "observed order {order}");
}

// The profile update is backward Euler whatever the front coupling, so the
// trapezoidal corrector leaves the global order at one.
#[test]
fn trapezoidal_coupling_keeps_first_order_in_time() {
    for k in [1, 2] {
        let order = temporal_order(k);
        assert!((order - 1.0).abs() <= 0.3, "coupling {k}: observed order {order}");
    }
}

#[test]
fn stationary_error_is_second_order_in_space() {
    let p = SelfSimilarProfile::new(H_UNIT).unwrap();
    let errors: Vec<(f64, f64)> = [50, 100, 200]
        .iter()
        .map(|&n| {
            let cfg = SolverConfig::new(H_UNIT).with_intervals(n).with_dtau(1e-4);
            let traj = run(SimilarityState::from_profile(&p, n).unwrap(), &cfg, 0.5, 1_000_000).unwrap();
            let last = traj.last();
            ((last.b() - p.omega()).abs(), sup_distance(&last.state, &p, COMMON_GRID_POINTS))
        })
        .collect();
    for w in errors.windows(2) {
        let front = (w[0].0 / w[1].0).log2();
        let profile = (w[0].1 / w[1].1).log2();
        assert!((front - 2.0).abs() <= 0.3, "front order {front}");
        assert!((profile - 2.0).abs() <= 0.3, "profile order {profile}");
    }
}
