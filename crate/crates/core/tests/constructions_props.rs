use proptest::prelude::*;

use landau_core::constructions::{
    phase_diagnostics, pinned_time, taylor_tail_bound, CounterexampleSpec, SharpnessSpec, sharpness_report,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pinned_time_below_one(theta in 1e-3..0.0099f64, a in 0.3..3.0f64, gamma in 1.2..4.0f64, u in 1e-6..1.0f64) {
        let spec = CounterexampleSpec::new(theta, a, gamma).unwrap();
        let x = u * spec.pinned_upper();
        let t = pinned_time(x, &spec).unwrap();
        prop_assert!(t > 0.0 && t < 1.0);
        if a != 1.0 {
            prop_assert!(t <= theta.powf(a * (spec.k0() + 1) as f64 - 2.0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn damping_nonnegative(theta in 1e-3..0.0099f64, a in 0.3..3.0f64, gamma in 1.2..4.0f64,
                           u in 1e-6..1.0f64, xi in -1.0..1.0f64) {
        let spec = CounterexampleSpec::new(theta, a, gamma).unwrap();
        let d = phase_diagnostics(xi, u * spec.pinned_upper(), &spec).unwrap();
        prop_assert!(d.psi >= 0.0 && d.phi.is_finite() && d.remainder.is_finite());
    }

    #[test]
    fn t0_below_ceiling(r in 200.0..1e5f64, a in 0.5..3.0f64, gamma in 0.3..3.0f64) {
        prop_assume!(((r + 1.0) / r).powf(a) <= 2.0);
        let sh = SharpnessSpec::new(r, a, gamma).unwrap();
        prop_assert!(sh.residual() <= 1e-12);
        // Strict in exact arithmetic; the t^2 term is below rounding when gamma < 1.
        prop_assert!(sh.t0() <= sh.t0_ceiling() * (1.0 + 1e-12));
    }
}

#[test]
fn pinned_times_sampled() {
    let spec = CounterexampleSpec::new(2f64.powi(-8), 2.0, 2.0).unwrap();
    for j in 1..=1000 {
        let t = pinned_time(spec.pinned_upper() * j as f64 / 1000.0, &spec).unwrap();
        assert!(t < 1.0);
    }
}

#[test]
fn sharpness_gap_positive() {
    let r = sharpness_report(1000.0, 2.0, 2.0).unwrap();
    assert!(r.first_order_min - r.tail > 1.0 / 200.0 - (std::f64::consts::E - 2.0) / 2500.0 - 1e-15);
    let tail3 = taylor_tail_bound(&SharpnessSpec::new(1e3, 2.0, 2.0).unwrap()).unwrap();
    let tail4 = taylor_tail_bound(&SharpnessSpec::new(1e4, 2.0, 2.0).unwrap()).unwrap();
    assert!(tail4 < tail3);
}
