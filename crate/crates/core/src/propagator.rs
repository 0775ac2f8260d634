//! The multiplier `m_t(xi) = exp(i t |xi|^a - t^gamma |xi|^a)`, evaluation of
//! `P^t f` on grids, at points and along curves, the finite-grid maximal
//! function, and the lattice-domination diagnostic for dyadic pieces.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{finite, invalid, positive, Error, Result};
use crate::spectral::{
    abs_pow, check_evaluable, fourier_integral, DyadicPiece, GridFunction, Phase, SpatialGrid,
    SpectralFunction, Weight,
};

/// `(a, gamma, t)` with `a, gamma > 0` and `0 < t <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorParams {
    a: f64,
    gamma: f64,
    t: f64,
}

impl PropagatorParams {
    pub fn new(a: f64, gamma: f64, t: f64) -> Result<Self> {
        positive("a", a)?;
        positive("gamma", gamma)?;
        positive("t", t)?;
        if t > 1.0 {
            return Err(invalid("t must be in (0, 1]"));
        }
        Ok(Self { a, gamma, t })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Self::new(self.a, self.gamma, t)
    }

    /// The multiplier as a quadrature phase at position `x`.
    pub fn phase(&self, x: f64) -> Phase {
        Phase { x, dispersion: self.t, damping: self.t.powf(self.gamma), a: self.a }
    }
}

pub fn landau_multiplier(xi: f64, params: &PropagatorParams) -> Complex64 {
    let r = abs_pow(xi, params.a);
    if r == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar((-params.t.powf(params.gamma) * r).exp(), params.t * r)
}

/// `P^t f(x) = (1/2pi) int f^(xi) m_t(xi) e^{i x xi} dxi`.
pub fn propagate_point(spec: &SpectralFunction, x: f64, params: &PropagatorParams) -> Result<Complex64> {
    finite("x", x)?;
    Ok(fourier_integral(spec, params.phase(x), Weight::One)? / (2.0 * PI))
}

pub fn propagate_grid(spec: &SpectralFunction, grid: &SpatialGrid, params: &PropagatorParams) -> Result<GridFunction> {
    check_evaluable(spec)?;
    let values = grid
        .points()
        .par_iter()
        .map(|&x| propagate_point(spec, x, params))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(*grid, values)
}

// ---------------------------------------------------------------------------

/// Finite set of times standing in for `0 < t < 1`, stored in decreasing
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    values: Vec<f64>,
}

impl TimeGrid {
    pub const DEFAULT_T_MAX: f64 = 1.0;
    pub const DEFAULT_T_MIN: f64 = 1e-8;

    pub fn default_ratio() -> f64 {
        2f64.powf(-0.25)
    }

    /// `t_j = t_max * ratio^j` for every `j` with `t_j >= t_min`.
    pub fn geometric(t_max: f64, t_min: f64, ratio: f64) -> Result<Self> {
        positive("t_max", t_max)?;
        positive("t_min", t_min)?;
        positive("ratio", ratio)?;
        if t_max > 1.0 {
            return Err(invalid("t_max must be at most 1"));
        }
        if t_min > t_max {
            return Err(invalid("t_min must not exceed t_max"));
        }
        if ratio >= 1.0 {
            return Err(invalid("ratio must be in (0, 1)"));
        }
        let n = ((t_min / t_max).ln() / ratio.ln() + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(invalid("time grid too large"));
        }
        let values = (0..=n).map(|j| t_max * ratio.powi(j as i32)).collect();
        Ok(Self { values })
    }

    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("time grid is empty"));
        }
        if values.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(invalid("time grid values must lie in (0, 1]"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        values.dedup();
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds the geometric midpoint of every consecutive pair.
    pub fn refine(&self) -> Self {
        let mut v = self.values.clone();
        v.extend(self.values.windows(2).map(|w| (w[0] * w[1]).sqrt()));
        Self::from_values(v).expect("refinement keeps values in (0, 1]")
    }

    pub fn with_point(&self, t: f64) -> Result<Self> {
        let mut v = self.values.clone();
        v.push(t);
        Self::from_values(v)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self::geometric(Self::DEFAULT_T_MAX, Self::DEFAULT_T_MIN, Self::default_ratio())
            .expect("default grid is valid")
    }
}

/// `max_j |P^{t_j} f(x)|`, a lower bound for the supremum over `(0, 1)`.
pub fn maximal(spec: &SpectralFunction, x: f64, tgrid: &TimeGrid, a: f64, gamma: f64) -> Result<f64> {
    if tgrid.is_empty() {
        return Err(invalid("time grid is empty"));
    }
    let vals = tgrid
        .values()
        .par_iter()
        .map(|&t| Ok(propagate_point(spec, x, &PropagatorParams::new(a, gamma, t)?)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// `Gamma(x, t) = x`.
    Vertical,
    /// `Gamma(x, t) = x - t^beta`.
    PowerShift,
    /// `Gamma(x, t) = x + s(t)` with `s` piecewise linear through the nodes.
    Tabulated { times: Vec<f64>, shifts: Vec<f64> },
}

/// An approach path `Gamma(x, t)` with `Gamma(x, 0) = x`, declared on the
/// ball `B(anchor, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoelderCurve {
    beta: f64,
    kind: CurveKind,
    anchor: f64,
    radius: f64,
}

impl HoelderCurve {
    pub fn vertical(anchor: f64, radius: f64) -> Result<Self> {
        Self::build(1.0, CurveKind::Vertical, anchor, radius)
    }

    pub fn power_shift(beta: f64, anchor: f64, radius: f64) -> Result<Self> {
        Self::build(beta, CurveKind::PowerShift, anchor, radius)
    }

    /// Tabulated shift `s(t)`; `times` must start at 0, increase strictly
    /// and stay in `[0, 1]`, and `shifts[0]` must be 0.
    pub fn tabulated(beta: f64, times: Vec<f64>, shifts: Vec<f64>, anchor: f64, radius: f64) -> Result<Self> {
        if times.len() != shifts.len() || times.len() < 2 {
            return Err(invalid("tabulated curve needs matching times and shifts, at least 2"));
        }
        if times[0] != 0.0 || shifts[0] != 0.0 {
            return Err(invalid("tabulated curve must satisfy Gamma(x, 0) = x"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || *times.last().unwrap() > 1.0 {
            return Err(invalid("tabulated times must increase strictly within [0, 1]"));
        }
        if shifts.iter().any(|s| !s.is_finite()) {
            return Err(invalid("tabulated shifts must be finite"));
        }
        Self::build(beta, CurveKind::Tabulated { times, shifts }, anchor, radius)
    }

    fn build(beta: f64, kind: CurveKind, anchor: f64, radius: f64) -> Result<Self> {
        positive("beta", beta)?;
        if beta > 1.0 {
            return Err(invalid("beta must be in (0, 1]"));
        }
        finite("anchor", anchor)?;
        positive("radius", radius)?;
        Ok(Self { beta, kind, anchor, radius })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self.kind, CurveKind::Vertical)
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.anchor).abs() <= self.radius
    }
}

pub fn curve_eval(curve: &HoelderCurve, x: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t must be in [0, 1]"));
    }
    Ok(match &curve.kind {
        CurveKind::Vertical => x,
        CurveKind::PowerShift => x - t.powf(curve.beta),
        CurveKind::Tabulated { times, shifts } => {
            let j = times.partition_point(|&s| s <= t);
            if j >= times.len() {
                x + shifts[shifts.len() - 1]
            } else {
                let (t0, t1) = (times[j - 1], times[j]);
                let w = (t - t0) / (t1 - t0);
                x + shifts[j - 1] * (1.0 - w) + shifts[j] * w
            }
        }
    })
}

/// Sampled Hoelder constant `max |Gamma(x,t) - Gamma(x,t')| / |t - t'|^beta`
/// over `pairs` random pairs in `[0, 1]`.
pub fn holder_constant(curve: &HoelderCurve, x: f64, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..pairs {
        let t: f64 = rng.random();
        let s: f64 = rng.random();
        if t == s {
            continue;
        }
        let d = (curve_eval(curve, x, t)? - curve_eval(curve, x, s)?).abs();
        best = best.max(d / (t - s).abs().powf(curve.beta));
    }
    Ok(best)
}

/// Compares `|int e^{i Gamma(x,t) xi} f_k^(xi) dxi|` with the lattice sum
/// `sum_{|l| <= L} (1+|l|)^{-2} |int e^{i (x + l/lambda) xi} f_k^(xi) dxi|`.
///
/// Returns `(lhs, rhs)`; no constant is applied.
pub fn li_wang_compare(
    piece: &DyadicPiece,
    curve: &HoelderCurve,
    x: f64,
    t: f64,
    lattice_half_width: u32,
) -> Result<(f64, f64)> {
    let lambda = piece.scale;
    let limit = lambda.powf(-1.0 / curve.beta);
    if !(t < limit) {
        return Err(Error::OutsideLatticeRegime { t, limit });
    }
    let spec = &piece.spectrum;
    let lhs = fourier_integral(spec, Phase::spatial(curve_eval(curve, x, t)?), Weight::One)?.norm();
    let l_max = lattice_half_width as i64;
    let terms = (-l_max..=l_max)
        .into_par_iter()
        .map(|l| {
            let v = fourier_integral(spec, Phase::spatial(x + l as f64 / lambda), Weight::One)?.norm();
            Ok(v / (1.0 + l.abs() as f64).powi(2))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((lhs, crate::quad::pairwise_sum(&terms)))
}

/// `sup lhs/rhs` over diagnostic pairs with nonzero right side.
pub fn empirical_constant(pairs: &[(f64, f64)]) -> f64 {
    pairs
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|p| p.0 / p.1)
        .fold(0.0, f64::max)
}
