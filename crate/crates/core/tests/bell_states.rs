use bb84_keyrate::{
    effective_bit_error, reconciliation_term, BellDiagonalState, ProcessedQubitState,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn reconciliation_ignores_singlet_weight(
        p in 0.0f64..0.5,
        frac in 0.0f64..=1.0,
        q in 0.0f64..=0.5,
        m in 1usize..40,
    ) {
        let worst = BellDiagonalState::worst_case(p).unwrap();
        let other = BellDiagonalState::new(p, frac * p).unwrap();
        for s in [worst, other] {
            let w = s.weights();
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(w.iter().all(|&x| (0.0..=1.0).contains(&x)));
            let flips = s.error_probability(true, false) + s.error_probability(true, true);
            prop_assert!((flips - p).abs() < 1e-12);
            prop_assert!((s.phase_error_rate() - p).abs() < 1e-12);
        }
        let a = reconciliation_term(m, effective_bit_error(worst.bit_error_rate(), q)).unwrap();
        let b = reconciliation_term(m, effective_bit_error(other.bit_error_rate(), q)).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn processed_state_is_physical(p in 0.0f64..0.5, q in 0.0f64..=0.5) {
        let s = ProcessedQubitState::new(p, q).unwrap();
        prop_assert!(s.r() <= 1.0 + 1e-15);
        prop_assert!((s.lambda_plus() + s.lambda_minus() - 1.0).abs() < 1e-15);
        prop_assert!(s.theta() >= 0.0 && s.theta() <= std::f64::consts::PI);
        let rho = s.matrix();
        prop_assert!((rho[0][0] + rho[1][1] - 1.0).abs() < 1e-15);
        prop_assert_eq!(rho[0][1], rho[1][0]);
    }
}

#[test]
fn worst_case_weights() {
    let s = BellDiagonalState::worst_case(0.1).unwrap();
    let w = s.weights();
    let expected = [1.0 + 0.01 - 0.2, 0.09, 0.09, 0.01];
    for (a, b) in w.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(BellDiagonalState::new(0.1, 0.2).is_err());
    assert!(BellDiagonalState::new(0.5, 0.1).is_err());
}
