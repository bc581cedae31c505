//! Structural properties of the time-domain recursion on a small scene.

use fthms::cli::RunConfig;
use fthms::multiscatter::{RunOptions, RunOutput};
use proptest::prelude::*;

fn config(amplitude: f64, theta: f64, eps_tol: f64) -> RunConfig {
    let text = format!(
        r#"{{
        "geometry": [{{"shape": {{"kind": "circle", "center": [0, 0], "radius": 1}},
                      "treatment": {{"kind": "decomposed", "patches": 3, "overlap_fraction": 0.35}}}}],
        "resolution": {{"nodes_per_panel": 10}},
        "incident": {{"field": {{"variant": "gaussian-plane", "theta": {theta}}}, "amplitude": {amplitude}}},
        "frequency": {{"lo": 1, "W": 8, "J": 41}},
        "time": {{"H": 6, "dt": 0.1, "t0": -2}},
        "M": 3,
        "eps_tol": {eps_tol},
        "observation": [[0.3, 0.1], [-0.2, 0.4]]
    }}"#
    );
    RunConfig::from_json(&text).unwrap()
}

fn run(cfg: &RunConfig) -> RunOutput {
    let s = cfg.scenario().unwrap();
    s.run(&s.layout().unwrap(), RunOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn partial_sums_scale_with_amplitude(theta in -3.0..3.0f64) {
        let one = run(&config(1.0, theta, 0.0));
        let two = run(&config(2.0, theta, 0.0));
        for (a, b) in one.partial_sums.iter().zip(&two.partial_sums) {
            let scale = a.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (u, v) in a.data.iter().zip(&b.data) {
                prop_assert!((2.0 * u - v).norm() <= 1e-12 * scale.max(1.0));
            }
        }
    }

    #[test]
    fn zero_tolerance_prunes_nothing(theta in -3.0..3.0f64) {
        let out = run(&config(1.0, theta, 0.0));
        prop_assert!(out.report.pruned.is_empty());
        prop_assert_eq!(out.partial_sums.len(), 3);
    }
}

#[test]
fn reruns_are_bitwise_identical() {
    let cfg = config(1.0, 0.4, 0.0);
    let (a, b) = (run(&cfg), run(&cfg));
    for (x, y) in a.partial_sums.iter().zip(&b.partial_sums) {
        assert_eq!(x, y);
    }
}

#[test]
fn pruning_tolerance_bounds() {
    let full = run(&config(1.0, 0.0, 0.0));
    // below every data maximum: identical to no pruning
    let tiny = run(&config(1.0, 0.0, 1e-300));
    assert!(tiny.report.pruned.is_empty());
    assert_eq!(full.partial_sums, tiny.partial_sums);
    // above every data maximum: every solve is dropped and the field is zero
    let all = run(&config(1.0, 0.0, 1e30));
    assert_eq!(all.report.pruned.len(), 3);
    assert!(all.partial_sums.iter().all(|s| s.data.iter().all(|v| v.norm() == 0.0)));
}
