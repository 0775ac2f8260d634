use num_complex::Complex64;
use proptest::prelude::*;

use landau_core::propagator::{landau_multiplier, maximal, propagate_point, PropagatorParams, TimeGrid};
use landau_core::spectral::{SampledSpectrum, SpectralFunction};

fn sampled(values: impl Fn(f64) -> Complex64) -> SpectralFunction {
    let (xi0, dxi, n) = (-20.0, 0.05, 801);
    let v = (0..n).map(|j| values(xi0 + dxi * j as f64)).collect();
    SpectralFunction::sampled(SampledSpectrum::new(xi0, dxi, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplier_deviation(xi in -100.0..100.0f64, t in 1e-12..1.0f64, a in 0.05..4.0f64, gamma in 0.05..4.0f64) {
        let p = PropagatorParams::new(a, gamma, t).unwrap();
        let lhs = (landau_multiplier(xi, &p) - 1.0).norm();
        let rhs = (t + t.powf(gamma)) * xi.abs().powf(a);
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn contraction(x in -10.0..10.0f64, t in 1e-6..1.0f64, gamma in 0.2..3.0f64, a in 0.5..3.0f64,
                   lo in -30.0..30.0f64, len in 0.1..20.0f64) {
        let p = PropagatorParams::new(a, gamma, t).unwrap();
        let g = SpectralFunction::gaussian(1.3, 0.7, 0.5).unwrap();
        let g_l1 = 1.3 * (2.0 * std::f64::consts::PI).sqrt() / 0.7;
        prop_assert!(propagate_point(&g, x, &p).unwrap().norm() <= g_l1 / (2.0 * std::f64::consts::PI) * (1.0 + 1e-10));
        let ind = SpectralFunction::indicator(lo, lo + len, 2.0).unwrap();
        prop_assert!(propagate_point(&ind, x, &p).unwrap().norm() <= 2.0 * len / (2.0 * std::f64::consts::PI) * (1.0 + 1e-10));
    }

    #[test]
    fn linearity(x in -5.0..5.0f64, t in 1e-4..1.0f64, alpha in -3.0..3.0f64, c in -2.0..2.0f64) {
        let p = PropagatorParams::new(2.0, 1.5, t).unwrap();
        let f = |xi: f64| Complex64::new((-xi * xi / 2.0).exp(), 0.0);
        let g = |xi: f64| Complex64::from_polar((-(xi - 1.0).powi(2)).exp(), -c * xi);
        let combo = sampled(|xi| alpha * f(xi) + g(xi));
        let lhs = propagate_point(&combo, x, &p).unwrap();
        let rhs = alpha * propagate_point(&sampled(f), x, &p).unwrap() + propagate_point(&sampled(g), x, &p).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn refining_never_lowers_maximal(x in -3.0..3.0f64, gamma in 0.3..3.0f64) {
        let g = SpectralFunction::standard_gaussian();
        let grid = TimeGrid::geometric(1.0, 1e-4, 0.5).unwrap();
        let coarse = maximal(&g, x, &grid, 2.0, gamma).unwrap();
        let fine = maximal(&g, x, &grid.refine(), 2.0, gamma).unwrap();
        prop_assert!(fine >= coarse);
    }
}

#[test]
fn no_semigroup() {
    let (t1, t2) = (0.2, 0.3);
    let p = |t| PropagatorParams::new(2.0, 2.0, t).unwrap();
    let xi = 1.7;
    let composed = landau_multiplier(xi, &p(t1)) * landau_multiplier(xi, &p(t2));
    let direct = landau_multiplier(xi, &p(t1 + t2));
    assert!((composed - direct).norm() > 1e-2);
}
