mod common;

use common::*;
use proptest::prelude::*;
use salobj::stats::{Reference, DEFAULT_ALPHA};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ppcc_ignores_location_and_scale(
        samples in prop::collection::vec(-10.0f64..10.0, 3..200),
        shift in -100.0f64..100.0,
        scale in 0.01f64..100.0,
        reference in prop::sample::select(Reference::ALL.to_vec()),
    ) {
        check_ppcc_affine(&samples, shift, scale, reference)?;
    }

    #[test]
    fn quantiles_strictly_increase(n in 3usize..1500) {
        check_quantiles_increasing(n)?;
    }

    #[test]
    fn filliben_closed_form(n in 3usize..1500) {
        check_filliben(n)?;
    }

    #[test]
    fn t_tests_ignore_common_shift(
        a in prop::collection::vec(-5.0f64..5.0, 2..40),
        b in prop::collection::vec(-5.0f64..5.0, 2..40),
        shift in -50.0f64..50.0,
    ) {
        let n = a.len().min(b.len());
        check_t_test_invariances(&a[..n], &b[..n], shift)?;
        check_t_test_invariances(&a, &b, shift)?;
    }

    #[test]
    fn inverse_normal_matches_reference(p in 1e-12f64..(1.0 - 1e-12)) {
        check_inverse_normal(p)?;
    }

    #[test]
    fn t_tail_matches_quadrature(t in -8.0f64..8.0, df in 1.0f64..1000.0) {
        check_t_tail(t, df)?;
    }

    #[test]
    fn t_tail_large_df(t in -6.0f64..6.0) {
        check_t_tail_large_df(t)?;
    }
}

#[test]
fn t_tail_spot_values() {
    use salobj::stats::student_t_tail;
    assert_eq!(student_t_tail(0.0, 7.0), 0.5);
    assert!((student_t_tail(1.0, 1.0) - (0.5 - 1f64.atan() / std::f64::consts::PI)).abs() < 1e-14);
    assert!((student_t_tail(1.96, 1e5) - 0.0250).abs() < 1e-4);
}

#[test]
fn synthetic_model_passes_ppcc() {
    let counts: Vec<(Reference, usize)> = [Reference::Uniform, Reference::HalfGaussian]
        .into_iter()
        .map(|reference| (reference, synthetic_ppcc_passes(reference, 1000, 100, DEFAULT_ALPHA)))
        .collect();
    assert!(
        counts.iter().all(|&(_, passes)| passes >= 99),
        "passes out of 100 seeds: {counts:?}"
    );
}
