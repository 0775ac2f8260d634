//! Explicit extremal data.
//!
//! The divergence family has spectrum
//! `f_theta^(w) = theta^{k0} g(theta^{k0} w + 1/theta)`, a bump sitting at
//! `w ~ -theta^{-k0-1}`. After the change of variables
//! `xi = theta^{k0} w + 1/theta` the propagator at `(x, t)` becomes
//! `(1/2pi) int g(xi) e^{i Phi(xi)} e^{-Psi(xi)} dxi` up to a unimodular
//! factor, and at the pinned time `Phi` stays below `pi/2` on the whole
//! bump, which forces `|P^t f_theta(x)| >= c0`.
//!
//! The sharpness family has spectrum `chi_[R, R+1]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{positive, Error, Result};
use crate::propagator::{maximal, propagate_point, PropagatorParams, TimeGrid};
use crate::quad;
use crate::spectral::{fourier_integral, spatial_lp_norm_pow, synthesize_point, Phase, SpectralFunction, Weight};

pub use crate::profile::bump;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionCase {
    /// `a != 1`
    One,
    /// `a == 1`
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSpec {
    theta: f64,
    a: f64,
    gamma: f64,
    k0: u32,
    a0: f64,
    case: ConstructionCase,
}

/// `k0 = 2 ceil(gamma / (min(a,1) (gamma-1)))` for `a != 1`,
/// `2 ceil(gamma / (gamma-1))` for `a == 1`.
pub fn k0_index(a: f64, gamma: f64) -> Result<u32> {
    positive("a", a)?;
    positive("gamma", gamma)?;
    if gamma <= 1.0 {
        return Err(Error::GammaTooSmall(gamma));
    }
    let denom = if a == 1.0 { gamma - 1.0 } else { a.min(1.0) * (gamma - 1.0) };
    let q = (gamma / denom).ceil();
    if q > 1e6 {
        return Err(crate::error::invalid("k0 too large: gamma too close to 1"));
    }
    Ok(2 * q as u32)
}

impl CounterexampleSpec {
    pub fn new(theta: f64, a: f64, gamma: f64) -> Result<Self> {
        positive("theta", theta)?;
        if theta >= 0.01 {
            return Err(crate::error::invalid("theta must be in (0, 1/100)"));
        }
        let k0 = k0_index(a, gamma)?;
        let case = if a == 1.0 { ConstructionCase::Two } else { ConstructionCase::One };
        let a0 = match case {
            ConstructionCase::One => a.min(1.0).min(1.0 / (a - 1.0).abs()),
            ConstructionCase::Two => 1.0,
        };
        Ok(Self { theta, a, gamma, k0, a0, case })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn case(&self) -> ConstructionCase {
        self.case
    }

    /// Right end of the pinned interval `(0, a0 theta^{k0-1}]`.
    pub fn pinned_upper(&self) -> f64 {
        self.a0 * self.theta.powi(self.k0 as i32 - 1)
    }

    /// `theta^{a(k0+1)}`
    fn p_scale(&self) -> f64 {
        self.theta.powf(self.a * (self.k0 + 1) as f64)
    }
}

pub fn f_theta(spec: &CounterexampleSpec) -> SpectralFunction {
    let s = spec.theta.powi(spec.k0 as i32);
    SpectralFunction::scaled_bump(s, s, 1.0 / spec.theta, 0.0).expect("valid counterexample parameters")
}

/// `t = x theta^{a(k0+1)-1-k0} / a` (case one) or `t = x` (case two).
pub fn pinned_time(x: f64, spec: &CounterexampleSpec) -> Result<f64> {
    let upper = spec.pinned_upper();
    if !(x > 0.0 && x <= upper) {
        return Err(Error::OutsidePinnedInterval { x, upper });
    }
    Ok(match spec.case {
        ConstructionCase::One => {
            let e = spec.a * (spec.k0 + 1) as f64 - 1.0 - spec.k0 as f64;
            x * spec.theta.powf(e) / spec.a
        }
        ConstructionCase::Two => x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDiagnostics {
    pub phi: f64,
    pub psi: f64,
    /// `t R2(xi)`; zero in case two.
    pub remainder: f64,
}

/// `(1-u)^a - 1 + a u - a(a-1)/2 u^2`, by the binomial series for small
/// `|u|` and directly otherwise.
pub fn taylor_remainder(a: f64, u: f64) -> f64 {
    if u.abs() < 0.1 {
        // sum_{j>=3} C(a, j) (-u)^j
        let mut c = a * (a - 1.0) * (a - 2.0) / 6.0;
        let mut pw = -u * u * u;
        let mut sum = 0.0;
        for j in 3..400 {
            let term = c * pw;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() || c == 0.0 {
                break;
            }
            c *= (a - j as f64) / (j + 1) as f64;
            pw *= -u;
        }
        sum
    } else {
        (1.0 - u).powf(a) - 1.0 + a * u - 0.5 * a * (a - 1.0) * u * u
    }
}

/// `Phi`, `Psi` and `t R2` at the pinned time for `|xi| <= 1`.
pub fn phase_diagnostics(xi: f64, x: f64, spec: &CounterexampleSpec) -> Result<PhaseDiagnostics> {
    if !(-1.0..=1.0).contains(&xi) {
        return Err(crate::error::invalid("xi must be in [-1, 1]"));
    }
    let t = pinned_time(x, spec)?;
    let th = spec.theta;
    let k0 = spec.k0 as i32;
    Ok(match spec.case {
        ConstructionCase::One => {
            let a = spec.a;
            let remainder = t * taylor_remainder(a, th * xi) / spec.p_scale();
            let phi = 0.5 * (a - 1.0) * x * xi * xi * th.powi(1 - k0) + remainder;
            let psi = t.powf(spec.gamma) * (1.0 - th * xi).powf(a) / spec.p_scale();
            PhaseDiagnostics { phi, psi, remainder }
        }
        ConstructionCase::Two => {
            let phi = (x - t) * xi / th.powi(k0);
            let psi = t.powf(spec.gamma) * (1.0 / th.powi(k0 + 1) - xi / th.powi(k0));
            PhaseDiagnostics { phi, psi, remainder: 0.0 }
        }
    })
}

/// Extremes of the diagnostics over an `n_x` by `n_xi` sweep of
/// `(0, upper] x [-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSweep {
    pub phi_max: f64,
    pub psi_max: f64,
    pub remainder_max: f64,
}

pub fn sweep_x(spec: &CounterexampleSpec, n_x: usize) -> Vec<f64> {
    let upper = spec.pinned_upper();
    (1..=n_x).map(|j| upper * j as f64 / n_x as f64).collect()
}

/// Extremes over `n_xi` equispaced `xi` in `[-1, 1]` at a single `x`.
pub fn phase_extremes(spec: &CounterexampleSpec, x: f64, n_xi: usize) -> Result<PhaseSweep> {
    if n_xi < 2 {
        return Err(crate::error::invalid("n_xi must be at least 2"));
    }
    let mut out = PhaseSweep { phi_max: 0.0, psi_max: 0.0, remainder_max: 0.0 };
    for i in 0..n_xi {
        let xi = if i + 1 == n_xi { 1.0 } else { -1.0 + 2.0 * i as f64 / (n_xi - 1) as f64 };
        let d = phase_diagnostics(xi, x, spec)?;
        out.phi_max = out.phi_max.max(d.phi.abs());
        out.psi_max = out.psi_max.max(d.psi.abs());
        out.remainder_max = out.remainder_max.max(d.remainder.abs());
    }
    Ok(out)
}

pub fn phase_sweep(spec: &CounterexampleSpec, n_x: usize, n_xi: usize) -> Result<PhaseSweep> {
    let mut out = PhaseSweep { phi_max: 0.0, psi_max: 0.0, remainder_max: 0.0 };
    for x in sweep_x(spec, n_x) {
        let e = phase_extremes(spec, x, n_xi)?;
        out.phi_max = out.phi_max.max(e.phi_max);
        out.psi_max = out.psi_max.max(e.psi_max);
        out.remainder_max = out.remainder_max.max(e.remainder_max);
    }
    Ok(out)
}

/// `int g`, with `g` the smooth bump.
pub fn bump_integral() -> f64 {
    quad::integrate_real(bump, -1.0, 1.0, &[-0.5, 0.5], 0.125, 1e-14).expect("smooth integrand")
}

/// `c0 = cos(Phi_max) e^{-Psi_max} (1/2pi) int g`.
pub fn lower_bound_constant(sweep: &PhaseSweep) -> f64 {
    sweep.phi_max.cos() * (-sweep.psi_max).exp() * bump_integral() / (2.0 * PI)
}

/// Geometric time grid around the pinned time, containing it.
pub fn pinned_time_grid(t_pin: f64) -> Result<TimeGrid> {
    let hi = (16.0 * t_pin).min(1.0);
    TimeGrid::geometric(hi, t_pin / 16.0, TimeGrid::default_ratio())?.with_point(t_pin)
}

/// One row of the divergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleRow {
    pub x: f64,
    pub t_pinned: f64,
    /// `|P^{t(x)} f_theta(x)|`
    pub pinned_abs: f64,
    /// Maximal function over [`pinned_time_grid`].
    pub maximal: f64,
    /// `|f_theta(x)|`
    pub f_theta_abs: f64,
}

pub fn counterexample_rows(spec: &CounterexampleSpec, n_x: usize) -> Result<Vec<CounterexampleRow>> {
    let f = f_theta(spec);
    sweep_x(spec, n_x)
        .into_par_iter()
        .map(|x| {
            let t = pinned_time(x, spec)?;
            let params = PropagatorParams::new(spec.a, spec.gamma, t)?;
            let pinned_abs = propagate_point(&f, x, &params)?.norm();
            let grid = pinned_time_grid(t)?;
            let maximal = maximal(&f, x, &grid, spec.a, spec.gamma)?.max(pinned_abs);
            let f_theta_abs = synthesize_point(&f, x)?.norm();
            Ok(CounterexampleRow { x, t_pinned: t, pinned_abs, maximal, f_theta_abs })
        })
        .collect()
}

/// `||f_theta||_p^p / theta^{k0}` by spatial quadrature.
pub fn f_theta_norm_ratio(spec: &CounterexampleSpec, p: f64) -> Result<f64> {
    let f = f_theta(spec);
    let n = spatial_lp_norm_pow(&f, p, 1e-7, 64)?;
    Ok(n / spec.theta.powi(spec.k0 as i32))
}

// ---------------------------------------------------------------------------

/// `chi_[R, R+1]`
pub fn f_sharp(r: f64) -> Result<SpectralFunction> {
    positive("R", r)?;
    SpectralFunction::indicator(r, r + 1.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessSpec {
    r: f64,
    a: f64,
    gamma: f64,
    t0: f64,
}

/// `h(t) = t^2 + t^{2 gamma}`
pub fn h_sharp(t: f64, gamma: f64) -> f64 {
    t * t + t.powf(2.0 * gamma)
}

/// Root of `h(t0) = R^{-2a}/10^4` on `(0, 1)` by bisection in `log t`.
pub fn solve_t0(r: f64, a: f64, gamma: f64) -> Result<f64> {
    positive("R", r)?;
    positive("a", a)?;
    positive("gamma", gamma)?;
    let target = r.powf(-2.0 * a) / 1e4;
    if !(target < h_sharp(1.0, gamma)) {
        return Err(Error::BracketFailure(format!("target {target:e} not below h(1) = 2")));
    }
    if target == 0.0 || !target.is_normal() {
        return Err(Error::BracketFailure("target underflows".into()));
    }
    let mut lo = (0.5 * target.sqrt().min(target.powf(0.5 / gamma))).ln();
    let mut hi = 0.0f64;
    if !(h_sharp(lo.exp(), gamma) < target) {
        return Err(Error::BracketFailure("lower end does not bracket".into()));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h_sharp(mid.exp(), gamma) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (tl, th) = (lo.exp(), hi.exp());
    let (rl, rh) = ((h_sharp(tl, gamma) - target).abs(), (h_sharp(th, gamma) - target).abs());
    Ok(if rl <= rh { tl } else { th })
}

impl SharpnessSpec {
    /// Requires `(R+1)^a / R^a <= 2`.
    pub fn new(r: f64, a: f64, gamma: f64) -> Result<Self> {
        positive("R", r)?;
        positive("a", a)?;
        positive("gamma", gamma)?;
        if ((r + 1.0) / r).powf(a) > 2.0 {
            return Err(crate::error::invalid("R too small: need (R+1)^a / R^a <= 2"));
        }
        let t0 = solve_t0(r, a, gamma)?;
        Ok(Self { r, a, gamma, t0 })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// `|h(t0) - R^{-2a}/10^4| / (R^{-2a}/10^4)`
    pub fn residual(&self) -> f64 {
        let target = self.r.powf(-2.0 * self.a) / 1e4;
        (h_sharp(self.t0, self.gamma) - target).abs() / target
    }

    /// Upper bound `R^{-a/min(1,gamma)} / 100^{1/min(1,gamma)}` for `t0`.
    pub fn t0_ceiling(&self) -> f64 {
        let m = self.gamma.min(1.0);
        self.r.powf(-self.a / m) / 100f64.powf(1.0 / m)
    }
}

/// `int_R^{R+1} e^{i x xi} (i t0 - t0^gamma) |xi|^a dxi` for `|x| < 1/1000`.
pub fn first_order_integral(x: f64, sharp: &SharpnessSpec) -> Result<Complex64> {
    if !(x.abs() < 1e-3) {
        return Err(Error::OutsideBall(x.abs()));
    }
    let spec = f_sharp(sharp.r)?;
    let base = fourier_integral(&spec, Phase::spatial(x), Weight::AbsPow(sharp.a))?;
    Ok(base * Complex64::new(-sharp.t0.powf(sharp.gamma), sharp.t0))
}

/// Eleven points spread over the ball `|x| < 1/1000`.
pub fn sharpness_x_samples() -> Vec<f64> {
    (0..11).map(|j| (j as f64 - 5.0) / 5.0 * 0.999e-3).collect()
}

/// Terms `h(t0)^{j/2} int_R^{R+1} xi^{aj} dxi / j!` for `j >= 2`, until
/// they drop below `1e-18`.
pub fn taylor_tail_terms(sharp: &SharpnessSpec) -> Result<Vec<f64>> {
    let (r, a) = (sharp.r, sharp.a);
    if ((r + 1.0) / r).powf(a) > 2.0 {
        return Err(crate::error::invalid("R too small: need (R+1)^a / R^a <= 2"));
    }
    let q = h_sharp(sharp.t0, sharp.gamma).sqrt() * r.powf(a);
    let l = (1.0 / r).ln_1p();
    let mut terms = Vec::new();
    let mut qj_over_fact = q * q / 2.0;
    for j in 2..1000u32 {
        let n = a * j as f64 + 1.0;
        // R^{-aj} int_R^{R+1} xi^{aj} = R ((1+1/R)^{aj+1} - 1) / (aj+1)
        let integral = r * (n * l).exp_m1() / n;
        let term = qj_over_fact * integral;
        terms.push(term);
        if term < 1e-18 {
            break;
        }
        qj_over_fact *= q / (j + 1) as f64;
    }
    Ok(terms)
}

pub fn taylor_tail_bound(sharp: &SharpnessSpec) -> Result<f64> {
    Ok(quad::pairwise_sum(&taylor_tail_terms(sharp)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessReport {
    pub t0: f64,
    pub residual: f64,
    pub first_order_min: f64,
    pub tail: f64,
}

pub fn sharpness_report(r: f64, a: f64, gamma: f64) -> Result<SharpnessReport> {
    let sharp = SharpnessSpec::new(r, a, gamma)?;
    let mut first_order_min = f64::INFINITY;
    for x in sharpness_x_samples() {
        first_order_min = first_order_min.min(first_order_integral(x, &sharp)?.norm());
    }
    Ok(SharpnessReport {
        t0: sharp.t0,
        residual: sharp.residual(),
        first_order_min,
        tail: taylor_tail_bound(&sharp)?,
    })
}
