//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use landau_core::constructions::{
    counterexample_rows, f_theta_norm_ratio, lower_bound_constant, phase_sweep, sharpness_report, CounterexampleSpec,
};
use landau_core::propagator::{landau_multiplier, propagate_grid, propagate_point, HoelderCurve, PropagatorParams, TimeGrid};
use landau_core::rates::{rate_report, screen_generic, RateExperiment};
use landau_core::sobolev::{gagliardo_fourier_constant, gagliardo_seminorm, homogeneous_energy, NormInput};
use landau_core::spectral::{lp_decompose, SpatialGrid, SpectralFunction};

fn verdict(n: u32, name: &str, ok: bool, elapsed: Duration, budget: Duration, detail: String) {
    let in_time = elapsed < budget;
    let tag = if ok && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {n} [{tag}] {name}: {detail}; {:.2} s (budget {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} over budget: {elapsed:?}");
}

fn rate_grid() -> TimeGrid {
    TimeGrid::geometric(1e-2, 1e-6, TimeGrid::default_ratio()).unwrap()
}

#[test]
fn criterion_1_sharpness_constants() {
    let start = Instant::now();
    let r = sharpness_report(1000.0, 2.0, 2.0).unwrap();
    let bound = (std::f64::consts::E - 2.0) / 2500.0;
    let ok = r.residual <= 1e-12 && r.first_order_min >= 1.0 / 200.0 && r.tail <= bound;
    verdict(
        1,
        "sharpness constants",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        format!("residual {:.2e}, first order min {:.6}, tail {:.4e} <= {:.4e}", r.residual, r.first_order_min, r.tail, bound),
    );
}

#[test]
fn criterion_2_vertical_rate_ceiling() {
    let start = Instant::now();
    let g = SpectralFunction::standard_gaussian();
    let mut detail = Vec::new();
    let mut ok = true;
    for gamma in [0.5, 2.0] {
        let curve = HoelderCurve::vertical(0.0, 1.0).unwrap();
        let exp = RateExperiment::new(g.clone(), curve, 2.0, gamma, f64::INFINITY, rate_grid(), vec![0.0]).unwrap();
        let rows = rate_report(&exp).unwrap();
        let target = gamma.min(1.0);
        for row in rows {
            ok &= (row.fit.slope - target).abs() <= 0.05;
            detail.push(format!("gamma {gamma}: slope {:.4} (target {target})", row.fit.slope));
        }
    }
    verdict(2, "vertical-line rate", ok, start.elapsed(), Duration::from_secs(10), detail.join(", "));
}

#[test]
fn criterion_3_curve_rate() {
    let start = Instant::now();
    let g = SpectralFunction::standard_gaussian();
    let curve = HoelderCurve::power_shift(0.5, 0.0, 2.0).unwrap();
    let candidates = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5];
    let xs: Vec<f64> = screen_generic(&g, &candidates, &curve, 2.0, 2.0).unwrap().into_iter().take(5).collect();
    assert_eq!(xs.len(), 5);
    let exp = RateExperiment::new(g, curve, 2.0, 2.0, f64::INFINITY, rate_grid(), xs).unwrap();
    let rows = rate_report(&exp).unwrap();
    let ok = rows.iter().all(|r| (r.fit.slope - 0.5).abs() <= 0.05);
    let slopes: Vec<String> = rows.iter().map(|r| format!("x={}: {:.4}", r.x, r.fit.slope)).collect();
    verdict(3, "curve rate", ok, start.elapsed(), Duration::from_secs(10), slopes.join(", "));
}

#[test]
fn criterion_4_counterexample_lower_bound() {
    let start = Instant::now();
    let spec = CounterexampleSpec::new(2f64.powi(-8), 2.0, 2.0).unwrap();
    assert_eq!(spec.k0(), 4);
    let sweep = phase_sweep(&spec, 64, 201).unwrap();
    let c0 = lower_bound_constant(&sweep);
    let rows = counterexample_rows(&spec, 32).unwrap();
    let min_pinned = rows.iter().map(|r| r.pinned_abs).fold(f64::INFINITY, f64::min);
    let half = 0.5 * spec.pinned_upper();
    let min_gap = rows
        .iter()
        .filter(|r| r.x >= half)
        .map(|r| r.maximal - r.f_theta_abs)
        .fold(f64::INFINITY, f64::min);
    let n7 = f_theta_norm_ratio(&CounterexampleSpec::new(2f64.powi(-7), 2.0, 2.0).unwrap(), 1.5).unwrap();
    let n8 = f_theta_norm_ratio(&spec, 1.5).unwrap();
    let factor = n7.max(n8) / n7.min(n8);
    let ok = sweep.phi_max < PI / 2.0 && min_pinned >= c0 && min_gap >= c0 / 2.0 && factor <= 3.0;
    verdict(
        4,
        "counterexample lower bound",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
        format!(
            "phi_max {:.4}, psi_max {:.3e}, c0 {:.5}, min |P f| {:.5}, min gap {:.5}, norm ratios {:.4}/{:.4}",
            sweep.phi_max, sweep.psi_max, c0, min_pinned, min_gap, n7, n8
        ),
    );
}

#[test]
fn criterion_5_multiplier_deviation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let a = rng.random_range(0.1..4.0);
        let gamma = rng.random_range(0.1..4.0);
        let t = rng.random_range(1e-9..1.0f64);
        let xi = rng.random_range(-50.0..50.0f64);
        let p = PropagatorParams::new(a, gamma, t).unwrap();
        let lhs = (landau_multiplier(xi, &p) - 1.0).norm();
        let rhs = (t + t.powf(gamma)) * xi.abs().powf(a);
        worst = worst.max(lhs - rhs);
    }
    let ok = worst <= 1e-12;
    verdict(5, "multiplier deviation", ok, start.elapsed(), Duration::from_secs(1), format!("max excess {worst:.3e}"));
}

#[test]
fn criterion_6_lp_reconstruction() {
    let start = Instant::now();
    let spec = SpectralFunction::indicator(-300.0, 700.0, 1.5).unwrap();
    let pieces = lp_decompose(&spec, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut supports_ok = true;
    for _ in 0..1000 {
        let xi = rng.random_range(-800.0..800.0f64);
        let whole = spec.eval(xi);
        let sum: Complex64 = pieces.iter().map(|p| p.spectrum.eval(xi)).sum();
        let err = (sum - whole).norm() / whole.norm().max(1.0);
        worst = worst.max(err);
        for p in &pieces {
            if p.spectrum.eval(xi).norm() == 0.0 {
                continue;
            }
            let r = xi.abs();
            supports_ok &= if p.index == 0 { r <= 2.0 } else { r >= p.scale / 2.0 && r <= 2.0 * p.scale };
        }
    }
    let ok = worst <= 1e-12 && supports_ok;
    verdict(
        6,
        "dyadic reconstruction",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        format!("{} pieces, max relative error {worst:.2e}, supports respected {supports_ok}", pieces.len()),
    );
}

#[test]
fn criterion_7_gagliardo_fourier_identity() {
    let start = Instant::now();
    let u = SpectralFunction::gaussian(PI.sqrt(), FRAC_1_SQRT_2, 0.0).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [0.25, 0.5, 0.75] {
        let lhs = gagliardo_seminorm(NormInput::Catalog(&u), s, 2.0).unwrap().powi(2);
        let rhs = gagliardo_fourier_constant(s).unwrap() * homogeneous_energy(&u, s).unwrap();
        let rel = (lhs - rhs).abs() / rhs;
        ok &= rel <= 1e-2;
        detail.push(format!("s={s}: rel {rel:.2e}"));
    }
    verdict(7, "Gagliardo-Fourier identity", ok, start.elapsed(), Duration::from_secs(30), detail.join(", "));
}

#[test]
fn criterion_8_gaussian_oracle() {
    let start = Instant::now();
    let g = SpectralFunction::standard_gaussian();
    let grid = SpatialGrid::new(0.0, 8.0, 1000).unwrap();
    let mut worst: f64 = 0.0;
    for (gamma, t) in [(2.0, 0.01), (0.5, 0.001)] {
        let p = PropagatorParams::new(2.0, gamma, t).unwrap();
        let a = Complex64::new(0.5 + t.powf(gamma), -t);
        let exact = |x: f64| (PI / a).sqrt() * (-x * x / (4.0 * a)).exp() / (2.0 * PI);
        let out = propagate_grid(&g, &grid, &p).unwrap();
        for (i, v) in out.values().iter().enumerate() {
            worst = worst.max((v - exact(grid.x(i))).norm());
        }
        for x in [-3.3, 0.0, 1.7] {
            worst = worst.max((propagate_point(&g, x, &p).unwrap() - exact(x)).norm());
        }
    }
    let ok = worst <= 1e-8;
    verdict(8, "gaussian propagator oracle", ok, start.elapsed(), Duration::from_secs(5), format!("sup error {worst:.2e}"));
}
