//! Convergence rates of `P^t f(Gamma(x, t)) -> f(x)` as `t -> 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, positive, Error, Result};
use crate::propagator::{curve_eval, propagate_point, HoelderCurve, PropagatorParams, TimeGrid};
use crate::spectral::{fourier_integral, synthesize_point, Phase, SpectralFunction, Weight};

/// Errors below this are dropped before fitting.
pub const NOISE_FLOOR: f64 = 1e-12;
/// Number of smallest-`t` samples used by [`fit_rate`] inside [`rate_report`].
pub const FIT_WINDOW: usize = 12;
/// Threshold for the generic-point screen.
pub const SCREEN_THRESHOLD: f64 = 1e-6;

/// Exponent `h` expected for data with `delta` extra derivatives.
///
/// `delta = f64::INFINITY` stands for Schwartz data and yields the ceiling
/// `min(1, gamma)` on vertical lines and `min(beta, gamma)` on curves.
pub fn predicted_h(curve: &HoelderCurve, a: f64, gamma: f64, delta: f64) -> Result<f64> {
    positive("a", a)?;
    positive("gamma", gamma)?;
    if !(delta >= 0.0) {
        return Err(invalid("delta must be nonnegative"));
    }
    let m = gamma.min(1.0);
    if curve.is_vertical() {
        return Ok((delta * m / a).min(m));
    }
    let beta = curve.beta();
    let h = if a >= m && beta >= m / a { delta * m / a } else { beta * delta };
    Ok(h.min(beta.min(gamma)))
}

#[derive(Debug, Clone)]
pub struct RateExperiment {
    pub spec: SpectralFunction,
    pub curve: HoelderCurve,
    pub a: f64,
    pub gamma: f64,
    pub delta: f64,
    pub predicted_h: f64,
    pub tgrid: TimeGrid,
    pub x_samples: Vec<f64>,
}

impl RateExperiment {
    pub fn new(
        spec: SpectralFunction,
        curve: HoelderCurve,
        a: f64,
        gamma: f64,
        delta: f64,
        tgrid: TimeGrid,
        x_samples: Vec<f64>,
    ) -> Result<Self> {
        let predicted_h = predicted_h(&curve, a, gamma, delta)?;
        if let Some(x) = x_samples.iter().find(|x| !curve.contains(**x)) {
            return Err(invalid(format!("x = {x} outside the curve's ball")));
        }
        Ok(Self { spec, curve, a, gamma, delta, predicted_h, tgrid, x_samples })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_used: usize,
}

/// `(t, |P^t f(Gamma(x,t)) - f(x)|)` over the grid, largest `t` first,
/// with sub-floor entries removed.
pub fn error_samples(exp: &RateExperiment, x: f64) -> Result<Vec<(f64, f64)>> {
    if !exp.curve.contains(x) {
        return Err(invalid(format!("x = {x} outside the curve's ball")));
    }
    let f0 = synthesize_point(&exp.spec, x)?;
    let out = exp
        .tgrid
        .values()
        .par_iter()
        .map(|&t| {
            let params = PropagatorParams::new(exp.a, exp.gamma, t)?;
            let y = curve_eval(&exp.curve, x, t)?;
            Ok((t, (propagate_point(&exp.spec, y, &params)? - f0).norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<_> = out.into_iter().filter(|s| s.1 >= NOISE_FLOOR).collect();
    if kept.is_empty() {
        return Err(Error::BelowNoiseFloor(NOISE_FLOOR));
    }
    Ok(kept)
}

/// Least squares line through `(ln t, ln err)`.
pub fn fit_rate(samples: &[(f64, f64)]) -> Result<RateFit> {
    if samples.len() < 3 {
        return Err(invalid("fit needs at least 3 samples"));
    }
    if samples.iter().any(|s| !(s.0 > 0.0 && s.1 > 0.0)) {
        return Err(invalid("fit needs positive t and err"));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(invalid("fit needs distinct t values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    Ok(RateFit { slope, intercept, r_squared, n_used: samples.len() })
}

/// `(1/2pi) int e^{i x xi} Q(xi) f^(xi) dxi` with `Q` chosen by comparing
/// `beta` and `gamma`, or `Q = |xi|^a` when `beta` is `None` (vertical line).
pub fn limit_functional(spec: &SpectralFunction, x: f64, beta: Option<f64>, gamma: f64, a: f64) -> Result<Complex64> {
    positive("a", a)?;
    positive("gamma", gamma)?;
    let weight = match beta {
        None => Weight::AbsPow(a),
        Some(b) => {
            positive("beta", b)?;
            if b < gamma {
                Weight::Xi
            } else if b > gamma {
                Weight::AbsPow(a)
            } else {
                Weight::IXiPlusAbsPow(a)
            }
        }
    };
    Ok(fourier_integral(spec, Phase::spatial(x), weight)? / (2.0 * PI))
}

/// Keeps the points where the limit functional exceeds [`SCREEN_THRESHOLD`].
pub fn screen_generic(spec: &SpectralFunction, xs: &[f64], curve: &HoelderCurve, gamma: f64, a: f64) -> Result<Vec<f64>> {
    let beta = (!curve.is_vertical()).then(|| curve.beta());
    let mut out = Vec::new();
    for &x in xs {
        if limit_functional(spec, x, beta, gamma, a)?.norm() > SCREEN_THRESHOLD {
            out.push(x);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub x: f64,
    pub fit: RateFit,
    pub predicted_h: f64,
    /// `err / t^h` decreases across the final decade of `t`.
    pub o_consistent: bool,
    pub samples: Vec<(f64, f64)>,
}

fn o_consistent(samples: &[(f64, f64)], h: f64) -> bool {
    let Some(&(t_end, _)) = samples.last() else { return false };
    let decade: Vec<_> = samples.iter().filter(|s| s.0 <= 10.0 * t_end).collect();
    if decade.len() < 2 {
        return false;
    }
    let ratio = |s: &(f64, f64)| s.1 / s.0.powf(h);
    ratio(decade[decade.len() - 1]) < ratio(decade[0])
}

pub fn rate_report(exp: &RateExperiment) -> Result<Vec<RateRow>> {
    exp.x_samples
        .iter()
        .map(|&x| {
            let mut samples = error_samples(exp, x)?;
            samples.sort_by(|p, q| q.0.total_cmp(&p.0));
            let start = samples.len().saturating_sub(FIT_WINDOW);
            let fit = fit_rate(&samples[start..])?;
            Ok(RateRow { x, fit, predicted_h: exp.predicted_h, o_consistent: o_consistent(&samples, exp.predicted_h), samples })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertical() -> HoelderCurve {
        HoelderCurve::vertical(0.0, 10.0).unwrap()
    }

    #[test]
    fn fit_exact_power_law() {
        let s: Vec<_> = (0..10).map(|j| {
            let t = 10f64.powf(-(j as f64) / 3.0);
            (t, 3.0 * t.powf(0.7))
        }).collect();
        let f = fit_rate(&s).unwrap();
        assert!((f.slope - 0.7).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(f.n_used, 10);
    }

    #[test]
    fn fit_constant_and_rejections() {
        let s = [(1e-3, 2.0), (1e-4, 2.0), (1e-5, 2.0)];
        assert_eq!(fit_rate(&s).unwrap().slope, 0.0);
        assert!(fit_rate(&s[..2]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn predicted_exponents() {
        let v = vertical();
        assert_eq!(predicted_h(&v, 2.0, 2.0, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(predicted_h(&v, 2.0, 0.5, f64::INFINITY).unwrap(), 0.5);
        assert_eq!(predicted_h(&v, 2.0, 2.0, 1.0).unwrap(), 0.5);
        let c = HoelderCurve::power_shift(0.5, 0.0, 10.0).unwrap();
        assert_eq!(predicted_h(&c, 2.0, 2.0, f64::INFINITY).unwrap(), 0.5);
        assert_eq!(predicted_h(&c, 2.0, 2.0, 0.4).unwrap(), 0.2);
        let c = HoelderCurve::power_shift(0.25, 0.0, 10.0).unwrap();
        assert_eq!(predicted_h(&c, 4.0, 2.0, 0.4).unwrap(), 0.1);
        assert!(predicted_h(&v, 2.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn zero_data_is_below_floor() {
        let exp = RateExperiment::new(SpectralFunction::zero(), vertical(), 2.0, 2.0, f64::INFINITY, TimeGrid::default(), vec![0.0]).unwrap();
        assert_eq!(error_samples(&exp, 0.0), Err(Error::BelowNoiseFloor(NOISE_FLOOR)));
    }

    #[test]
    fn odd_limit_vanishes_at_origin() {
        let g = SpectralFunction::standard_gaussian();
        let v = limit_functional(&g, 0.0, Some(0.5), 2.0, 2.0).unwrap();
        assert!(v.norm() < 1e-14);
        // f = e^{-x^2/2}/sqrt(2 pi); -i f'(x) = i x f(x)
        let x = 0.7;
        let f = (-x * x / 2.0f64).exp() / (2.0 * PI).sqrt();
        let v = limit_functional(&g, x, Some(0.5), 2.0, 2.0).unwrap();
        assert!((v - Complex64::new(0.0, x * f)).norm() < 1e-12);
    }

    #[test]
    fn vertical_limit_is_minus_second_derivative() {
        let g = SpectralFunction::standard_gaussian();
        for x in [0.0, 0.4, 1.3] {
            let f = (-x * x / 2.0f64).exp() / (2.0 * PI).sqrt();
            let minus_f2 = (1.0 - x * x) * f;
            let v = limit_functional(&g, x, None, 2.0, 2.0).unwrap();
            assert!((v.re - minus_f2).abs() < 1e-8 && v.im.abs() < 1e-8);
        }
    }

    #[test]
    fn screen_drops_zero_of_derivative() {
        let g = SpectralFunction::standard_gaussian();
        let c = HoelderCurve::power_shift(0.5, 0.0, 10.0).unwrap();
        assert_eq!(screen_generic(&g, &[0.0, 0.5], &c, 2.0, 2.0).unwrap(), vec![0.5]);
    }

    #[test]
    fn ball_checked() {
        let c = HoelderCurve::vertical(0.0, 1.0).unwrap();
        let g = SpectralFunction::standard_gaussian();
        assert!(RateExperiment::new(g, c, 2.0, 2.0, 1.0, TimeGrid::default(), vec![2.0]).is_err());
    }
}
