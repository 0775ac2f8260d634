//! Frequency-side description of initial data and everything that turns it
//! into spatial samples.
//!
//! Conventions: `f^(xi) = int f(x) e^{-i x xi} dx` and
//! `f(x) = (1/2pi) int f^(xi) e^{i x xi} dxi`.
//!
//! All spatial values are computed by [`fourier_integral`], a composite
//! Gauss-Legendre rule whose panels are laid out so that the total phase
//! change across any panel stays below `pi/2`, with forced breaks at `xi = 0`
//! and at every point where the spectrum's profile changes regime.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{finite, invalid, positive, Error, Result};
use crate::profile::{bump, BUMP_KNOTS};
use crate::quad::{self, MAX_PANELS};

/// `e^{-r^2/2}` drops below `e^{-46} ~ 1e-20` outside this many widths.
pub const GAUSSIAN_DECAY_RADIUS: f64 = 9.591_663_046_625_438; // sqrt(92)

/// `exp(-x)` underflows to exactly zero in f64 for `x` above this.
const DAMPING_CUTOFF: f64 = 746.0;

/// Relative tolerance used by the panel-doubling check.
pub const QUAD_TOL: f64 = 1e-10;

const MAX_DOUBLINGS: usize = 6;

/// Cutoff filters applied on top of another spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Filter {
    /// `k`-th piece of the dyadic partition of unity.
    Dyadic(u32),
    /// `psi^(xi)`: 1 on `|xi| < 1`, 0 on `|xi| >= 2`.
    Lowpass,
    /// `1 - psi^(xi)`.
    Highpass,
}

impl Filter {
    pub fn eval(&self, xi: f64) -> f64 {
        let r = xi.abs();
        match *self {
            Filter::Dyadic(0) => bump(r / 2.0),
            Filter::Dyadic(k) => {
                let outer = bump(r / dyadic(k + 1));
                let inner = bump(r / dyadic(k));
                outer - inner
            }
            Filter::Lowpass => psi_hat(xi),
            Filter::Highpass => 1.0 - psi_hat(xi),
        }
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        match *self {
            Filter::Dyadic(0) | Filter::Lowpass => vec![(-2.0, 2.0)],
            Filter::Dyadic(k) => {
                let (lo, hi) = (dyadic(k - 1), dyadic(k + 1));
                vec![(-hi, -lo), (lo, hi)]
            }
            Filter::Highpass => vec![(f64::NEG_INFINITY, -1.0), (1.0, f64::INFINITY)],
        }
    }

    fn knots(&self, out: &mut Vec<f64>) {
        let scales: Vec<f64> = match *self {
            Filter::Dyadic(0) | Filter::Lowpass | Filter::Highpass => vec![2.0],
            Filter::Dyadic(k) => vec![dyadic(k), dyadic(k + 1)],
        };
        for s in scales {
            out.extend(BUMP_KNOTS.iter().map(|k| k * s));
        }
    }

    fn resolution(&self) -> f64 {
        // Narrowest ramp of the filter, over 8.
        match *self {
            Filter::Dyadic(0) | Filter::Lowpass | Filter::Highpass => 1.0 / 8.0,
            Filter::Dyadic(k) => dyadic(k) / 16.0,
        }
    }
}

fn dyadic(k: u32) -> f64 {
    2f64.powi(k as i32)
}

/// The smooth low-pass cutoff used by [`lowpass_split`].
pub fn psi_hat(omega: f64) -> f64 {
    bump(omega / 2.0)
}

/// A spectrum sampled on a uniform frequency grid, linearly interpolated
/// between nodes and zero outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectrum {
    xi0: f64,
    dxi: f64,
    values: Vec<Complex64>,
}

impl SampledSpectrum {
    pub fn new(xi0: f64, dxi: f64, values: Vec<Complex64>) -> Result<Self> {
        finite("xi0", xi0)?;
        positive("frequency spacing", dxi)?;
        if values.len() < 2 {
            return Err(invalid("sampled spectrum needs at least 2 nodes"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("sampled spectrum values must be finite"));
        }
        Ok(Self { xi0, dxi, values })
    }

    pub fn xi(&self, j: usize) -> f64 {
        self.xi0 + self.dxi * j as f64
    }

    pub fn spacing(&self) -> f64 {
        self.dxi
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn last(&self) -> f64 {
        self.xi(self.values.len() - 1)
    }

    fn eval(&self, xi: f64) -> Complex64 {
        let u = (xi - self.xi0) / self.dxi;
        let n = self.values.len();
        if !(0.0..=(n - 1) as f64).contains(&u) {
            return Complex64::default();
        }
        let j = (u.floor() as usize).min(n - 2);
        let w = u - j as f64;
        self.values[j] * (1.0 - w) + self.values[j + 1] * w
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Gaussian { amplitude: f64, width: f64, shift: f64 },
    Indicator { lo: f64, hi: f64, height: f64 },
    ScaledBump { amplitude: f64, scale: f64, offset: f64, shift: f64 },
    Filtered { filter: Filter, inner: Box<SpectralFunction> },
    Sampled(SampledSpectrum),
}

/// Initial data described by its Fourier transform.
///
/// Catalog entries:
///
/// * `gaussian`: `A exp(-w^2 xi^2 / 2) e^{-i c xi}`, i.e. the spatial
///   Gaussian `A/(sqrt(2pi) w) exp(-(x-c)^2/(2w^2))`.
/// * `interval-indicator`: `h` on `[lo, hi]`, 0 elsewhere.
/// * `scaled-bump`: `A g(s xi + o) e^{-i c xi}` with `g` the smooth bump.
/// * `dyadic-piece-of`, `lowpass-of`, `highpass-of`: a cutoff times another
///   spectrum.
/// * `sampled`: uniform samples with linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    kind: Kind,
}

impl SpectralFunction {
    pub fn gaussian(amplitude: f64, width: f64, shift: f64) -> Result<Self> {
        finite("amplitude", amplitude)?;
        positive("width", width)?;
        finite("shift", shift)?;
        Ok(Self { kind: Kind::Gaussian { amplitude, width, shift } })
    }

    /// `f^(xi) = exp(-xi^2/2)`.
    pub fn standard_gaussian() -> Self {
        Self { kind: Kind::Gaussian { amplitude: 1.0, width: 1.0, shift: 0.0 } }
    }

    /// The zero spectrum.
    pub fn zero() -> Self {
        Self { kind: Kind::Indicator { lo: 0.0, hi: 0.0, height: 0.0 } }
    }

    pub fn indicator(lo: f64, hi: f64, height: f64) -> Result<Self> {
        finite("lo", lo)?;
        finite("hi", hi)?;
        finite("height", height)?;
        if hi < lo {
            return Err(invalid("interval must satisfy lo <= hi"));
        }
        Ok(Self { kind: Kind::Indicator { lo, hi, height } })
    }

    pub fn scaled_bump(amplitude: f64, scale: f64, offset: f64, shift: f64) -> Result<Self> {
        finite("amplitude", amplitude)?;
        positive("scale", scale)?;
        finite("offset", offset)?;
        finite("shift", shift)?;
        Ok(Self { kind: Kind::ScaledBump { amplitude, scale, offset, shift } })
    }

    pub fn filtered(filter: Filter, inner: SpectralFunction) -> Self {
        Self { kind: Kind::Filtered { filter, inner: Box::new(inner) } }
    }

    pub fn sampled(s: SampledSpectrum) -> Self {
        Self { kind: Kind::Sampled(s) }
    }

    /// Catalog tag, as used in the JSON form.
    pub fn kind_tag(&self) -> &'static str {
        match &self.kind {
            Kind::Gaussian { .. } => "gaussian",
            Kind::Indicator { .. } => "interval-indicator",
            Kind::ScaledBump { .. } => "scaled-bump",
            Kind::Filtered { filter: Filter::Dyadic(_), .. } => "dyadic-piece-of",
            Kind::Filtered { filter: Filter::Lowpass, .. } => "lowpass-of",
            Kind::Filtered { filter: Filter::Highpass, .. } => "highpass-of",
            Kind::Sampled(_) => "sampled",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Gaussian { amplitude, width, shift } => vec![*amplitude, *width, *shift],
            Kind::Indicator { lo, hi, height } => vec![*lo, *hi, *height],
            Kind::ScaledBump { amplitude, scale, offset, shift } => {
                vec![*amplitude, *scale, *offset, *shift]
            }
            Kind::Filtered { filter: Filter::Dyadic(k), .. } => vec![*k as f64],
            Kind::Filtered { .. } => Vec::new(),
            Kind::Sampled(s) => {
                let mut p = vec![s.xi0, s.dxi];
                for v in &s.values {
                    p.push(v.re);
                    p.push(v.im);
                }
                p
            }
        }
    }

    pub fn inner(&self) -> Option<&SpectralFunction> {
        match &self.kind {
            Kind::Filtered { inner, .. } => Some(inner),
            _ => None,
        }
    }

    /// True for spectra that vanish identically outside a bounded set.
    pub fn is_compact(&self) -> bool {
        match &self.kind {
            Kind::Gaussian { amplitude, .. } => *amplitude == 0.0,
            Kind::Filtered { filter, inner } => {
                inner.is_compact() || !matches!(filter, Filter::Highpass)
            }
            _ => true,
        }
    }

    /// Spectrum value at `xi`.
    pub fn eval(&self, xi: f64) -> Complex64 {
        match &self.kind {
            Kind::Gaussian { amplitude, width, shift } => {
                let w = width * xi;
                let m = amplitude * (-0.5 * w * w).exp();
                if *shift == 0.0 {
                    Complex64::new(m, 0.0)
                } else {
                    Complex64::from_polar(m, -shift * xi)
                }
            }
            Kind::Indicator { lo, hi, height } => {
                if xi >= *lo && xi <= *hi {
                    Complex64::new(*height, 0.0)
                } else {
                    Complex64::default()
                }
            }
            Kind::ScaledBump { amplitude, scale, offset, shift } => {
                let m = amplitude * bump(scale * xi + offset);
                if *shift == 0.0 || m == 0.0 {
                    Complex64::new(m, 0.0)
                } else {
                    Complex64::from_polar(m, -shift * xi)
                }
            }
            Kind::Filtered { filter, inner } => {
                let w = filter.eval(xi);
                if w == 0.0 {
                    Complex64::default()
                } else {
                    inner.eval(xi) * w
                }
            }
            Kind::Sampled(s) => s.eval(xi),
        }
    }

    /// Frequency intervals outside which the spectrum is zero (or, for the
    /// Gaussian, below `e^{-46}` of its peak).
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match &self.kind {
            Kind::Gaussian { amplitude, width, .. } => {
                if *amplitude == 0.0 {
                    Vec::new()
                } else {
                    let r = GAUSSIAN_DECAY_RADIUS / width;
                    vec![(-r, r)]
                }
            }
            Kind::Indicator { lo, hi, height } => {
                if *height == 0.0 || hi <= lo {
                    Vec::new()
                } else {
                    vec![(*lo, *hi)]
                }
            }
            Kind::ScaledBump { amplitude, scale, offset, .. } => {
                if *amplitude == 0.0 {
                    Vec::new()
                } else {
                    vec![((-1.0 - offset) / scale, (1.0 - offset) / scale)]
                }
            }
            Kind::Filtered { filter, inner } => intersect(&inner.intervals(), &filter.intervals()),
            Kind::Sampled(s) => vec![(s.xi0, s.last())],
        }
    }

    /// Convex hull of [`Self::intervals`], `None` for the zero spectrum.
    pub fn support(&self) -> Option<(f64, f64)> {
        let ivs = self.intervals();
        let lo = ivs.iter().map(|iv| iv.0).reduce(f64::min)?;
        let hi = ivs.iter().map(|iv| iv.1).reduce(f64::max)?;
        Some((lo, hi))
    }

    /// `max |xi|` over the support, 0 for the zero spectrum.
    pub fn extent(&self) -> f64 {
        self.support().map_or(0.0, |(lo, hi)| lo.abs().max(hi.abs()))
    }

    /// Spatial position the function is concentrated around.
    pub fn spatial_center(&self) -> f64 {
        match &self.kind {
            Kind::Gaussian { shift, .. } | Kind::ScaledBump { shift, .. } => *shift,
            Kind::Filtered { inner, .. } => inner.spatial_center(),
            _ => 0.0,
        }
    }

    /// Spatial length scale, the reciprocal of the spectral width.
    pub fn spatial_scale(&self) -> f64 {
        match &self.kind {
            Kind::Gaussian { width, .. } => *width,
            _ => match self.support() {
                Some((lo, hi)) if hi > lo => 2.0 * PI / (hi - lo),
                _ => 1.0,
            },
        }
    }

    fn knots(&self, out: &mut Vec<f64>) {
        match &self.kind {
            Kind::Indicator { lo, hi, .. } => out.extend([*lo, *hi]),
            Kind::ScaledBump { scale, offset, .. } => {
                out.extend(BUMP_KNOTS.iter().map(|k| (k - offset) / scale))
            }
            Kind::Filtered { filter, inner } => {
                filter.knots(out);
                inner.knots(out);
            }
            _ => {}
        }
    }

    /// Largest panel width that resolves the amplitude profile.
    fn resolution(&self) -> f64 {
        match &self.kind {
            Kind::Gaussian { width, .. } => 0.5 / width,
            Kind::Indicator { .. } => f64::INFINITY,
            Kind::ScaledBump { scale, .. } => 0.5 / scale / 8.0,
            Kind::Filtered { filter, inner } => filter.resolution().min(inner.resolution()),
            Kind::Sampled(s) => s.dxi,
        }
    }

    /// The sampled spectrum itself, for the unfiltered `sampled` kind.
    pub fn as_sampled(&self) -> Option<&SampledSpectrum> {
        match &self.kind {
            Kind::Sampled(s) => Some(s),
            _ => None,
        }
    }

    fn sampled_base(&self) -> Option<&SampledSpectrum> {
        match &self.kind {
            Kind::Sampled(s) => Some(s),
            Kind::Filtered { inner, .. } => inner.sampled_base(),
            _ => None,
        }
    }

    /// Value at node `j` of the underlying sampled grid.
    fn eval_node(&self, j: usize) -> Complex64 {
        match &self.kind {
            Kind::Sampled(s) => s.values[j],
            Kind::Filtered { filter, inner } => {
                let base = self.sampled_base().expect("filtered sampled spectrum");
                inner.eval_node(j) * filter.eval(base.xi(j))
            }
            _ => unreachable!("eval_node on analytic spectrum"),
        }
    }

    fn validate_finite(&self) -> Result<()> {
        if self.params().iter().all(|p| p.is_finite()) {
            if let Some(inner) = self.inner() {
                inner.validate_finite()?;
            }
            Ok(())
        } else {
            Err(invalid("spectral parameters must be finite"))
        }
    }
}

fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            if lo < hi {
                out.push((lo, hi));
            }
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

// ---------------------------------------------------------------------------
// Oscillatory integrals

/// Phase and damping of the integrand
/// `exp(i x xi + i dispersion |xi|^a - damping |xi|^a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub x: f64,
    pub dispersion: f64,
    pub damping: f64,
    pub a: f64,
}

impl Phase {
    /// Plain inversion at `x` (unit multiplier).
    pub fn spatial(x: f64) -> Self {
        Self { x, dispersion: 0.0, damping: 0.0, a: 1.0 }
    }

    #[inline]
    fn factor(&self, xi: f64) -> Complex64 {
        if self.dispersion == 0.0 && self.damping == 0.0 {
            return Complex64::from_polar(1.0, self.x * xi);
        }
        let r = abs_pow(xi, self.a);
        Complex64::from_polar((-self.damping * r).exp(), self.x * xi + self.dispersion * r)
    }
}

#[inline]
pub(crate) fn abs_pow(xi: f64, a: f64) -> f64 {
    if a == 2.0 {
        xi * xi
    } else if a == 1.0 {
        xi.abs()
    } else {
        xi.abs().powf(a)
    }
}

/// Extra symbol multiplying the spectrum inside the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    One,
    /// `xi`
    Xi,
    /// `|xi|^a`
    AbsPow(f64),
    /// `i xi + |xi|^a`
    IXiPlusAbsPow(f64),
    /// `(i xi)^n`, the symbol of the `n`-th derivative.
    Derivative(u32),
}

impl Weight {
    #[inline]
    fn eval(&self, xi: f64) -> Complex64 {
        match *self {
            Weight::One => Complex64::new(1.0, 0.0),
            Weight::Xi => Complex64::new(xi, 0.0),
            Weight::AbsPow(a) => Complex64::new(abs_pow(xi, a), 0.0),
            Weight::IXiPlusAbsPow(a) => Complex64::new(abs_pow(xi, a), xi),
            Weight::Derivative(n) => Complex64::new(0.0, xi).powu(n),
        }
    }

    fn smooth_at_zero(&self) -> bool {
        match *self {
            Weight::AbsPow(a) | Weight::IXiPlusAbsPow(a) => is_even_integer(a),
            _ => true,
        }
    }
}

fn is_even_integer(a: f64) -> bool {
    a.fract() == 0.0 && (a as i64) % 2 == 0
}

/// Panel layout for a spectrum under a phase family. Valid for every phase
/// with the same exponent whose `|x|`, dispersion and damping do not exceed
/// the design phase's; damping only ever shrinks the integration range.
#[derive(Debug, Clone)]
pub struct PanelPlan {
    panels: Vec<(f64, f64)>,
}

impl PanelPlan {
    pub fn new(spec: &SpectralFunction, design: Phase, weight: Weight) -> Result<Self> {
        let mut ivs = spec.intervals();
        if design.damping > 0.0 {
            let rmax = (DAMPING_CUTOFF / design.damping).powf(1.0 / design.a);
            ivs = intersect(&ivs, &[(-rmax, rmax)]);
        }
        for &(lo, hi) in &ivs {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::SupportRequired);
            }
        }
        let mut knots = vec![0.0];
        spec.knots(&mut knots);
        let res = spec.resolution();
        let kink_at_zero = !weight.smooth_at_zero()
            || ((design.dispersion != 0.0 || design.damping != 0.0) && !is_even_integer(design.a));
        let mut panels = Vec::new();
        for (lo, hi) in ivs {
            for (u, v) in quad::split_at_points(lo, hi, &knots) {
                if kink_at_zero && (u == 0.0 || v == 0.0) {
                    grade_towards_zero(u, v, &mut panels);
                    continue;
                }
                subdivide(u, v, &design, res, &mut panels, 0)?;
                if panels.len() > MAX_PANELS {
                    return Err(Error::NotConverged("integrand too oscillatory".into()));
                }
            }
        }
        Ok(Self { panels })
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn panels(&self) -> &[(f64, f64)] {
        &self.panels
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    /// Single pass over the plan, no doubling check.
    pub fn integrate(&self, spec: &SpectralFunction, phase: Phase, weight: Weight) -> Complex64 {
        let f = |xi: f64| spec.eval(xi) * weight.eval(xi) * phase.factor(xi);
        quad::integrate_panels(&f, &self.panels)
    }
}

/// Geometric grading of a panel adjacent to 0, for `|xi|^a` with `a` not an
/// even integer.
pub(crate) fn grade_towards_zero(u: f64, v: f64, out: &mut Vec<(f64, f64)>) {
    const LEVELS: i32 = 40;
    let (near, far) = if u == 0.0 { (u, v) } else { (v, u) };
    let mut pts: Vec<f64> = (0..=LEVELS).map(|j| near + (far - near) * 0.5f64.powi(j)).collect();
    pts.push(near);
    pts.sort_by(f64::total_cmp);
    for w in pts.windows(2) {
        if w[1] > w[0] {
            out.push((w[0], w[1]));
        }
    }
}

fn subdivide(u: f64, v: f64, ph: &Phase, res: f64, out: &mut Vec<(f64, f64)>, depth: u32) -> Result<()> {
    let width = v - u;
    let dr = (abs_pow(v, ph.a) - abs_pow(u, ph.a)).abs();
    let phase_tv = ph.x.abs() * width + ph.dispersion.abs() * dr;
    let damp_tv = ph.damping * dr;
    let need = (phase_tv / FRAC_PI_2)
        .max(damp_tv)
        .max(width / res)
        .ceil()
        .max(1.0);
    if need <= 1.0 || depth > 48 {
        out.push((u, v));
        return Ok(());
    }
    if need > MAX_PANELS as f64 || out.len() > MAX_PANELS {
        return Err(Error::NotConverged("integrand too oscillatory".into()));
    }
    for (a, b) in quad::uniform_panels(u, v, width / need) {
        subdivide(a, b, ph, res, out, depth + 1)?;
    }
    Ok(())
}

/// `int f^(xi) w(xi) exp(i x xi + (i d - c)|xi|^a) dxi` (no `1/2pi`),
/// validated by panel doubling to [`QUAD_TOL`] relative to
/// `max(|I|, int |integrand|)`.
pub fn fourier_integral(spec: &SpectralFunction, phase: Phase, weight: Weight) -> Result<Complex64> {
    for v in [phase.x, phase.dispersion, phase.damping, phase.a] {
        if !v.is_finite() {
            return Err(invalid("phase parameters must be finite"));
        }
    }
    if let Some(base) = spec.sampled_base() {
        return Ok(discrete_sum(spec, base, phase, weight));
    }
    let plan = PanelPlan::new(spec, phase, weight)?;
    if plan.is_empty() {
        return Ok(Complex64::default());
    }
    let f = |xi: f64| spec.eval(xi) * weight.eval(xi) * phase.factor(xi);
    let g = |xi: f64| (spec.eval(xi) * weight.eval(xi)).norm() * (-phase.damping * abs_pow(xi, phase.a)).exp();
    let floor: f64 = quad::integrate_panels(&g, &plan.panels);
    quad::integrate_doubling(&f, plan.panels, QUAD_TOL, floor, MAX_DOUBLINGS)
}

/// Trapezoid sum over the nodes of a sampled spectrum.
fn discrete_sum(spec: &SpectralFunction, base: &SampledSpectrum, phase: Phase, weight: Weight) -> Complex64 {
    let n = base.values.len();
    let terms: Vec<Complex64> = (0..n)
        .map(|j| {
            let xi = base.xi(j);
            let c = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            spec.eval_node(j) * weight.eval(xi) * phase.factor(xi) * c
        })
        .collect();
    quad::pairwise_sum(&terms) * base.dxi
}

// ---------------------------------------------------------------------------
// Spatial grids

/// Uniform grid on `[center - half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    center: f64,
    half_width: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        finite("center", center)?;
        positive("half_width", half_width)?;
        if n_points < 2 {
            return Err(invalid("n_points must be at least 2"));
        }
        Ok(Self { center, half_width, n_points })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.center + self.half_width
        } else {
            self.center - self.half_width + self.spacing() * i as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }
}

/// Complex samples on a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: SpatialGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(invalid(format!(
                "grid function has {} values for {} grid points",
                values.len(),
                grid.n_points
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("grid function values must be finite"));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Piecewise-linear interpolant, zero outside the grid.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let h = self.grid.spacing();
        let u = (x - (self.grid.center - self.grid.half_width)) / h;
        let n = self.values.len();
        if !(0.0..=(n - 1) as f64).contains(&u) {
            return Complex64::default();
        }
        let j = (u.floor() as usize).min(n - 2);
        let w = u - j as f64;
        self.values[j] * (1.0 - w) + self.values[j + 1] * w
    }

    /// Sup-norm distance to another function on the same grid.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// CSV with header `x,re,im`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["x", "re", "im"]).expect("in-memory write");
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([fmt_f64(self.grid.x(i)), fmt_f64(v.re), fmt_f64(v.im)])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
    }

    /// Parses the `x,re,im` CSV form. The abscissae must be uniformly spaced.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
            return Err(Error::Parse("header must be x,re,im".into()));
        }
        let mut xs = Vec::new();
        let mut vals = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 3 {
                return Err(Error::Parse(format!("row {}: expected 3 fields", line + 2)));
            }
            let num = |k: usize| -> Result<f64> {
                let v: f64 = rec[k]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad number {:?}", line + 2, &rec[k])))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Parse(format!("row {}: non-finite value", line + 2)))
                }
            };
            xs.push(num(0)?);
            vals.push(Complex64::new(num(1)?, num(2)?));
        }
        if xs.len() < 2 {
            return Err(Error::Parse("need at least 2 rows".into()));
        }
        let (first, last) = (xs[0], xs[xs.len() - 1]);
        if last <= first {
            return Err(Error::Parse("x must be increasing".into()));
        }
        let grid = SpatialGrid::new(0.5 * (first + last), 0.5 * (last - first), xs.len())
            .map_err(|e| Error::Parse(e.to_string()))?;
        let h = grid.spacing();
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.x(i)).abs() > 1e-6 * h {
                return Err(Error::Parse(format!("row {}: x is not on a uniform grid", i + 2)));
            }
        }
        GridFunction::new(grid, vals)
    }
}

/// Shortest round-trip decimal form.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

// ---------------------------------------------------------------------------
// Operations

/// `f(x) = (1/2pi) int f^(xi) e^{i x xi} dxi` at a single point.
pub fn synthesize_point(spec: &SpectralFunction, x: f64) -> Result<Complex64> {
    Ok(fourier_integral(spec, Phase::spatial(x), Weight::One)? / (2.0 * PI))
}

/// Samples of the inverse transform on `grid`.
pub fn synthesize(spec: &SpectralFunction, grid: &SpatialGrid) -> Result<GridFunction> {
    check_evaluable(spec)?;
    let values = grid
        .points()
        .par_iter()
        .map(|&x| synthesize_point(spec, x))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(*grid, values)
}

pub(crate) fn check_evaluable(spec: &SpectralFunction) -> Result<()> {
    spec.validate_finite()?;
    if spec.intervals().iter().any(|iv| !iv.0.is_finite() || !iv.1.is_finite()) {
        return Err(Error::SupportRequired);
    }
    Ok(())
}

/// Trapezoid-rule transform `f^(xi) ~ sum f(x_n) e^{-i x_n xi} dx` onto the
/// frequency grid `xi_j = -pi/dx + j * pi/(2 half_width)` up to Nyquist.
///
/// The caller is responsible for the grid resolving the function: the input
/// should be band-limited below Nyquist and negligible at the grid ends.
pub fn forward_transform(f: &GridFunction) -> Result<SpectralFunction> {
    let grid = f.grid();
    if grid.n_points < 2 {
        return Err(invalid("n_points must be at least 2"));
    }
    let dx = grid.spacing();
    let span = 2.0 * grid.half_width;
    let dxi = PI / span;
    let xi_max = PI / dx;
    let m = (2.0 * xi_max / dxi).round() as usize + 1;
    let xi0 = -xi_max;
    let xs = grid.points();
    let n = xs.len();
    let values: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map(|j| {
            let xi = xi0 + dxi * j as f64;
            let terms: Vec<Complex64> = (0..n)
                .map(|k| {
                    let c = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                    f.values[k] * Complex64::from_polar(c, -xs[k] * xi)
                })
                .collect();
            quad::pairwise_sum(&terms) * dx
        })
        .collect();
    Ok(SpectralFunction::sampled(SampledSpectrum::new(xi0, dxi, values)?))
}

/// One piece of the dyadic decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicPiece {
    pub index: u32,
    pub spectrum: SpectralFunction,
    /// `lambda = 2^k`.
    pub scale: f64,
}

/// Smooth dyadic decomposition `f^ = sum_k phi_k f^`, with
/// `phi_0 = g(|xi|/2)` and `phi_k = g(|xi|/2^{k+1}) - g(|xi|/2^k)`, so
/// piece `k >= 1` lives on `2^{k-1} <= |xi| <= 2^{k+1}` and the partial sums
/// telescope to `g(|xi|/2^{K+1})`, which is 1 on `|xi| <= 2^K`.
///
/// Pieces whose support misses the spectrum are omitted.
pub fn lp_decompose(spec: &SpectralFunction, k_max: u32) -> Result<Vec<DyadicPiece>> {
    check_evaluable(spec)?;
    if k_max > 1000 {
        return Err(invalid("k_max must be at most 1000"));
    }
    let extent = spec.extent();
    if extent > dyadic(k_max) {
        return Err(Error::KMaxTooSmall { k_max, extent });
    }
    Ok((0..=k_max)
        .map(|k| SpectralFunction::filtered(Filter::Dyadic(k), spec.clone()))
        .zip(0..)
        .filter(|(s, _)| !s.intervals().is_empty())
        .map(|(spectrum, k)| DyadicPiece { index: k, spectrum, scale: dyadic(k) })
        .collect())
}

/// `f^ = f^ psi^ + f^ (1 - psi^)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowpassSplit {
    pub low: SpectralFunction,
    pub high: SpectralFunction,
}

impl LowpassSplit {
    /// The cutoff profile.
    pub fn psi_hat(&self, omega: f64) -> f64 {
        psi_hat(omega)
    }
}

pub fn lowpass_split(spec: &SpectralFunction) -> Result<LowpassSplit> {
    spec.validate_finite()?;
    Ok(LowpassSplit {
        low: SpectralFunction::filtered(Filter::Lowpass, spec.clone()),
        high: SpectralFunction::filtered(Filter::Highpass, spec.clone()),
    })
}

/// `int |f(x)|^p dx` of the synthesized function.
///
/// Integrates outward from the spatial center in windows of eight spatial
/// scales and stops once a window adds less than `tail_tol` of the running
/// total (or after `max_windows` windows per side). Each window shares one
/// frequency panel plan sized for its outer edge.
pub fn spatial_lp_norm_pow(spec: &SpectralFunction, p: f64, tail_tol: f64, max_windows: usize) -> Result<f64> {
    positive("p", p)?;
    check_evaluable(spec)?;
    if spec.intervals().is_empty() {
        return Ok(0.0);
    }
    let c = spec.spatial_center();
    let l = spec.spatial_scale();
    let window = 8.0 * l;
    let mut total = 0.0;
    for side in [1.0, -1.0] {
        for k in 0..max_windows {
            let (a, b) = (window * k as f64, window * (k + 1) as f64);
            let plan = PanelPlan::new(spec, Phase::spatial(c + side * b), Weight::One)?;
            let panels = quad::uniform_panels(a, b, l / 4.0);
            let nodes: Vec<(f64, f64)> = panels
                .iter()
                .flat_map(|&(u, v)| {
                    let r = quad::rule();
                    let (h, m) = (0.5 * (v - u), 0.5 * (u + v));
                    r.nodes.iter().zip(&r.weights).map(move |(&x, &w)| (m + h * x, h * w))
                })
                .collect();
            let vals: Vec<f64> = nodes
                .par_iter()
                .map(|&(y, w)| {
                    let fx = plan.integrate(spec, Phase::spatial(c + side * y), Weight::One) / (2.0 * PI);
                    w * fx.norm().powf(p)
                })
                .collect();
            let contrib = quad::pairwise_sum(&vals);
            total += contrib;
            if k >= 3 && contrib <= tail_tol * total {
                break;
            }
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Debug, Serialize, Deserialize)]
struct SpectralJson {
    kind: String,
    params: Vec<f64>,
    #[serde(default)]
    support: Option<[Option<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inner: Option<Box<SpectralJson>>,
}

impl SpectralFunction {
    /// `{"kind": ..., "params": [...], "support": [lo, hi]}`; filtered kinds
    /// carry the filtered spectrum under `"inner"`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("finite parameters serialize")
    }

    fn to_wire(&self) -> SpectralJson {
        let support = self.support().map(|(lo, hi)| [Some(lo), Some(hi)]).or(Some([Some(0.0), Some(0.0)]));
        SpectralJson {
            kind: self.kind_tag().to_string(),
            params: self.params(),
            support,
            inner: self.inner().map(|i| Box::new(i.to_wire())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: SpectralJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_wire(&wire)
    }

    fn from_wire(w: &SpectralJson) -> Result<Self> {
        let p = &w.params;
        let want = |n: usize| -> Result<()> {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("{} expects {n} params, got {}", w.kind, p.len())))
            }
        };
        let inner = || -> Result<SpectralFunction> {
            let i = w
                .inner
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("{} requires an inner spectrum", w.kind)))?;
            Self::from_wire(i)
        };
        let support = match w.support {
            Some([Some(lo), Some(hi)]) if lo.is_finite() && hi.is_finite() && lo <= hi => Some((lo, hi)),
            Some([Some(lo), Some(hi)]) if lo.is_finite() && hi.is_finite() => {
                return Err(Error::Parse("support must satisfy lo <= hi".into()))
            }
            _ => None,
        };
        let spec = match w.kind.as_str() {
            "gaussian" => {
                want(3)?;
                Self::gaussian(p[0], p[1], p[2])?
            }
            "interval-indicator" => {
                want(3)?;
                Self::indicator(p[0], p[1], p[2])?
            }
            "scaled-bump" => {
                want(4)?;
                Self::scaled_bump(p[0], p[1], p[2], p[3])?
            }
            "dyadic-piece-of" => {
                want(1)?;
                let k = p[0];
                if !(k.is_finite() && k >= 0.0 && k.fract() == 0.0 && k <= 1000.0) {
                    return Err(Error::Parse("dyadic index must be an integer in [0, 1000]".into()));
                }
                Self::filtered(Filter::Dyadic(k as u32), inner()?)
            }
            "lowpass-of" => {
                want(0)?;
                Self::filtered(Filter::Lowpass, inner()?)
            }
            "highpass-of" => {
                want(0)?;
                Self::filtered(Filter::Highpass, inner()?)
            }
            "sampled" => {
                // Sampled spectra are only meaningful with a declared, bounded support.
                let (lo, hi) = support.ok_or(Error::SupportRequired)?;
                if p.len() < 6 || !p.len().is_multiple_of(2) {
                    return Err(Error::Parse("sampled expects [xi0, dxi, re0, im0, re1, im1, ...]".into()));
                }
                let values = p[2..].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
                let s = SampledSpectrum::new(p[0], p[1], values)?;
                let tol = 1e-9 * s.dxi;
                if (s.xi0 - lo).abs() > tol || (s.last() - hi).abs() > tol {
                    return Err(Error::Parse("sampled support does not match its nodes".into()));
                }
                Self::sampled(s)
            }
            other => return Err(Error::Parse(format!("unknown spectral kind {other:?}"))),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss_closed_form(x: f64) -> f64 {
        (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
    }

    #[test]
    fn zero_spectrum_synthesizes_to_zero() {
        let g = SpatialGrid::new(0.0, 3.0, 7).unwrap();
        let f = synthesize(&SpectralFunction::zero(), &g).unwrap();
        assert!(f.values().iter().all(|v| *v == Complex64::default()));
    }

    #[test]
    fn gaussian_at_origin() {
        let v = synthesize_point(&SpectralFunction::standard_gaussian(), 0.0).unwrap();
        assert!((v.re - 0.398_942_280_401_432_7).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
        for x in [0.3, -1.7, 4.0] {
            let v = synthesize_point(&SpectralFunction::standard_gaussian(), x).unwrap();
            assert!((v.re - gauss_closed_form(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn indicator_at_origin() {
        for r in [0.0, 10.0, 1000.0] {
            let s = SpectralFunction::indicator(r, r + 1.0, 1.0).unwrap();
            let v = synthesize_point(&s, 0.0).unwrap();
            assert!((v - Complex64::new(1.0 / (2.0 * PI), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn indicator_matches_closed_form_off_origin() {
        let s = SpectralFunction::indicator(10.0, 11.0, 1.0).unwrap();
        for x in [0.5, -3.0, 40.0] {
            let v = synthesize_point(&s, x).unwrap();
            let i = Complex64::i();
            let exact = ((i * 11.0 * x).exp() - (i * 10.0 * x).exp()) / (i * x) / (2.0 * PI);
            assert!((v - exact).norm() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn evaluation_outside_compact_support_is_exactly_zero() {
        let specs = [
            SpectralFunction::indicator(2.0, 3.0, 1.0).unwrap(),
            SpectralFunction::scaled_bump(2.0, 0.5, 1.0, 0.3).unwrap(),
            SpectralFunction::filtered(Filter::Dyadic(3), SpectralFunction::indicator(-20.0, 5.0, 1.0).unwrap()),
            SpectralFunction::filtered(Filter::Lowpass, SpectralFunction::standard_gaussian()),
        ];
        for s in &specs {
            let (lo, hi) = s.support().unwrap();
            for d in [1e-9, 0.1, 1.0, 100.0] {
                assert_eq!(s.eval(lo - d), Complex64::default(), "{}", s.kind_tag());
                assert_eq!(s.eval(hi + d), Complex64::default(), "{}", s.kind_tag());
            }
        }
    }

    #[test]
    fn unbounded_support_is_rejected() {
        // A high-pass of a Gaussian is fine (the Gaussian bounds it); a
        // sampled spectrum without a support field is not.
        let json = r#"{"kind":"sampled","params":[0,1,1,0,1,0,1,0]}"#;
        assert_eq!(SpectralFunction::from_json(json), Err(Error::SupportRequired));
        let json = r#"{"kind":"sampled","params":[0,1,1,0,1,0,1,0],"support":[0,null]}"#;
        assert_eq!(SpectralFunction::from_json(json), Err(Error::SupportRequired));
    }

    #[test]
    fn non_finite_parameters_are_rejected() {
        assert!(SpectralFunction::gaussian(f64::NAN, 1.0, 0.0).is_err());
        assert!(SpectralFunction::indicator(0.0, f64::INFINITY, 1.0).is_err());
        assert!(SpectralFunction::scaled_bump(1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn forward_transform_of_zero_is_zero() {
        let g = SpatialGrid::new(0.0, 5.0, 11).unwrap();
        let f = GridFunction::new(g, vec![Complex64::default(); 11]).unwrap();
        let s = forward_transform(&f).unwrap();
        let base = s.sampled_base().unwrap();
        assert!(base.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn round_trip_reproduces_gaussian() {
        let g = SpatialGrid::new(0.0, 12.0, 241).unwrap();
        let f = synthesize(&SpectralFunction::standard_gaussian(), &g).unwrap();
        let s = forward_transform(&f).unwrap();
        let back = synthesize(&s, &g).unwrap();
        assert!(back.sup_distance(&f) <= 1e-6, "{}", back.sup_distance(&f));
        // The trapezoid pair is in fact spectrally accurate here.
        assert!(back.sup_distance(&f) <= 1e-12);
    }

    #[test]
    fn shift_multiplies_spectrum_by_phase() {
        let c = 1.25;
        let g0 = SpatialGrid::new(0.0, 12.0, 241).unwrap();
        let g1 = SpatialGrid::new(c, 12.0, 241).unwrap();
        let f0 = GridFunction::from_fn(g0, |x| Complex64::new(gauss_closed_form(x), 0.0)).unwrap();
        let f1 = GridFunction::from_fn(g1, |x| Complex64::new(gauss_closed_form(x - c), 0.0)).unwrap();
        let s0 = forward_transform(&f0).unwrap();
        let s1 = forward_transform(&f1).unwrap();
        let b0 = s0.sampled_base().unwrap();
        let b1 = s1.sampled_base().unwrap();
        for j in (0..b0.values().len()).step_by(17) {
            let xi = b0.xi(j);
            let expect = b0.values()[j] * Complex64::from_polar(1.0, -c * xi);
            assert!((b1.values()[j] - expect).norm() < 1e-12, "xi={xi}");
        }
    }

    #[test]
    fn lp_pieces_of_low_frequency_spec() {
        let s = SpectralFunction::indicator(-0.9, 0.8, 1.0).unwrap();
        let pieces = lp_decompose(&s, 3).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].index, 0);
        for i in 0..=200 {
            let xi = -1.0 + i as f64 / 100.0;
            assert_eq!(pieces[0].spectrum.eval(xi), s.eval(xi));
        }
    }

    #[test]
    fn lp_pieces_of_high_interval() {
        let s = SpectralFunction::indicator(1000.0, 1001.0, 1.0).unwrap();
        let pieces = lp_decompose(&s, 11).unwrap();
        // 2^{k-1} <= 1001 and 1000 <= 2^{k+1} only for k = 9, 10.
        let oracle: Vec<u32> = (0..=11u32)
            .filter(|&k| k >= 1 && 2f64.powi(k as i32 - 1) < 1001.0 && 1000.0 < 2f64.powi(k as i32 + 1))
            .collect();
        let ks: Vec<u32> = pieces.iter().map(|p| p.index).collect();
        assert_eq!(ks, oracle);
        assert_eq!(ks, vec![9, 10]);
        for p in &pieces {
            assert!(p.spectrum.eval(1000.5).norm() > 0.0);
        }
    }

    #[test]
    fn lp_rejects_small_k_max() {
        let s = SpectralFunction::indicator(1000.0, 1001.0, 1.0).unwrap();
        assert!(matches!(lp_decompose(&s, 9), Err(Error::KMaxTooSmall { .. })));
    }

    #[test]
    fn lp_synthesized_pieces_sum_to_spec() {
        let s = SpectralFunction::standard_gaussian();
        let pieces = lp_decompose(&s, 4).unwrap();
        let g = SpatialGrid::new(0.0, 4.0, 33).unwrap();
        let whole = synthesize(&s, &g).unwrap();
        let mut acc = vec![Complex64::default(); 33];
        for p in &pieces {
            let f = synthesize(&p.spectrum, &g).unwrap();
            for (a, v) in acc.iter_mut().zip(f.values()) {
                *a += v;
            }
        }
        let peak = whole.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = acc.iter().zip(whole.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-10 * peak, "{err}");
    }

    #[test]
    fn lowpass_split_pieces() {
        let low_only = SpectralFunction::indicator(-0.9, 0.9, 1.0).unwrap();
        let sp = lowpass_split(&low_only).unwrap();
        for i in 0..=100 {
            let xi = -0.95 + 1.9 * i as f64 / 100.0;
            assert_eq!(sp.high.eval(xi), Complex64::default());
        }
        let high_only = SpectralFunction::indicator(2.0, 5.0, 1.0).unwrap();
        let sp = lowpass_split(&high_only).unwrap();
        assert!(sp.low.intervals().is_empty());
        for i in 0..=100 {
            assert_eq!(sp.low.eval(2.0 + 3.0 * i as f64 / 100.0), Complex64::default());
        }
        let sp = lowpass_split(&SpectralFunction::standard_gaussian()).unwrap();
        let sum = sp.low.eval(1.5) + sp.high.eval(1.5);
        assert!((sum.re - (-1.125f64).exp()).abs() < 1e-15);
        assert_eq!(sp.psi_hat(0.99), 1.0);
        assert_eq!(sp.psi_hat(2.0), 0.0);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let s = SpectralFunction::filtered(
            Filter::Dyadic(4),
            SpectralFunction::scaled_bump(0.5, 0.25, -2.0, 1.0).unwrap(),
        );
        let back = SpectralFunction::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let json = r#"{"kind":"interval-indicator","params":[1000,1001,1],"support":[1000,1001]}"#;
        let s = SpectralFunction::from_json(json).unwrap();
        assert_eq!(s.support(), Some((1000.0, 1001.0)));
        assert!(SpectralFunction::from_json(r#"{"kind":"gaussian","params":[1,1]}"#).is_err());
        assert!(SpectralFunction::from_json(r#"{"kind":"nope","params":[]}"#).is_err());
        assert!(SpectralFunction::from_json(r#"{"kind":"lowpass-of","params":[]}"#).is_err());
        assert!(SpectralFunction::from_json("[").is_err());
    }

    #[test]
    fn grid_csv_round_trip() {
        let g = SpatialGrid::new(0.5, 2.0, 5).unwrap();
        let f = GridFunction::from_fn(g, |x| Complex64::new(x.sin(), x * x)).unwrap();
        let text = f.to_csv();
        assert!(text.starts_with("x,re,im\n"));
        let back = GridFunction::from_csv(&text).unwrap();
        assert!(back.sup_distance(&f) == 0.0);
        assert!(GridFunction::from_csv("x,re,im\n0,1,0\n1,1,0\n5,1,0\n").is_err());
        assert!(GridFunction::from_csv("a,b,c\n0,1,0\n1,1,0\n").is_err());
        assert!(GridFunction::from_csv("x,re,im\n0,1,0\n").is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(SpatialGrid::new(0.0, 1.0, 1).is_err());
        assert!(SpatialGrid::new(0.0, 0.0, 3).is_err());
        let g = SpatialGrid::new(1.0, 1.0, 3).unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0]);
        assert!(GridFunction::new(g, vec![Complex64::default(); 2]).is_err());
        assert!(GridFunction::new(g, vec![Complex64::new(f64::NAN, 0.0); 3]).is_err());
    }
}
