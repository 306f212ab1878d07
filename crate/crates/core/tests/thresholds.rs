use bb84_keyrate::keyrate::grid;
use bb84_keyrate::{
    find_threshold, key_rate, optimize_q, sweep, upper_bound_rate, Error, RateParams,
    ThresholdOptions,
};

fn rate(m: usize, p: f64, q: f64) -> f64 {
    key_rate(&RateParams::new(m, p, q).unwrap()).unwrap().rate
}

#[test]
fn rate_decreasing_in_p() {
    for (m, q) in [(1, 0.0), (1, 0.3), (7, 0.25), (40, 0.32)] {
        let ps = grid(0.02, 0.1601, 0.005);
        let rates: Vec<f64> = ps.iter().map(|&p| rate(m, p, q)).collect();
        for (w, p) in rates.windows(2).zip(&ps) {
            assert!(w[1] < w[0], "m={m} q={q} p={p}: {} -> {}", w[0], w[1]);
        }
    }
}

#[test]
fn upper_bound_dominates() {
    for m in [1, 4, 10, 50] {
        for q in [0.0, 0.2, 0.32, 0.45] {
            for p in grid(0.02, 0.1401, 0.01) {
                let ub = upper_bound_rate(p).unwrap();
                let r = rate(m, p, q);
                assert!(ub >= r, "m={m} q={q} p={p}: {ub} < {r}");
            }
        }
    }
}

#[test]
fn returned_bracket_straddles_zero() {
    for (m, q) in [(1, 0.0), (10, 0.3), (60, 0.3)] {
        let t = find_threshold(m, q, &ThresholdOptions::default()).unwrap();
        assert!(rate(m, t.p_threshold - t.bracket_width, q) > 0.0);
        assert!(rate(m, t.p_threshold + t.bracket_width, q) <= 0.0);
    }
}

#[test]
fn single_bit_optimum_sits_at_grid_edge() {
    let grid = grid(0.0, 0.5, 0.01);
    let best = optimize_q(1, &grid, &ThresholdOptions::default()).unwrap();
    assert!((best.q - 0.49).abs() < 1e-12);
    assert!((best.threshold.p_threshold - 0.1241).abs() < 2e-4);
}

#[test]
fn longer_blocks_move_optimum_inside() {
    let grid = grid(0.0, 0.5, 0.01);
    let opts = ThresholdOptions::default();
    let m10 = optimize_q(10, &grid, &opts).unwrap();
    assert!(m10.q > 0.2 && m10.q < 0.4, "{m10:?}");
    let m100 = optimize_q(100, &grid, &opts).unwrap();
    assert!(m100.threshold.p_threshold > m10.threshold.p_threshold);
    assert!(m100.q > 0.2 && m100.q < 0.4, "{m100:?}");
}

#[test]
fn longer_code_higher_threshold() {
    let rows = sweep(&[20, 10], &[0.25], &ThresholdOptions::default());
    let t10 = rows[0].outcome.as_ref().unwrap();
    let t20 = rows[1].outcome.as_ref().unwrap();
    assert_eq!((t10.m, t20.m), (10, 20));
    assert!(t20.p_threshold >= t10.p_threshold);
}

#[test]
fn nearly_noiseless_long_blocks_are_unresolved() {
    let err = find_threshold(100, 0.05, &ThresholdOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Unresolved { .. }), "{err}");
    let rows = sweep(&[100], &[0.05, 0.3], &ThresholdOptions::default());
    assert!(rows[0].outcome.is_err() && rows[1].outcome.is_ok());
}

#[test]
fn four_hundred_bits_sign_change() {
    assert!(rate(400, 0.129, 0.32) > 0.0);
    assert!(rate(400, 0.1295, 0.32) <= 0.0);
}
