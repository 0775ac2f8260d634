//! Composite Gauss-Legendre quadrature on explicit panel lists.
//!
//! Every integral in the crate funnels through [`integrate_panels`], which
//! evaluates a fixed-order rule per panel and combines panel values with
//! [`pairwise_sum`] in panel order. The reduction order depends only on the
//! panel list, never on scheduling, so results are bit-stable.

use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const GL_ORDER: usize = 20;

/// Hard cap on the number of panels a single integral may use.
pub const MAX_PANELS: usize = 1 << 22;

/// Values that can be accumulated by the quadrature routines.
pub trait Scalar: Copy + Add<Output = Self> + Mul<f64, Output = Self> + Default {
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// A Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights of order `n`, by Newton iteration on
/// `P_n` from the Tricomi initial guesses.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "rule order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Three-term recurrence for P_n(x) and P_{n-1}(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

pub(crate) fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Fixed-order pairwise summation: split in halves recursively, so the
/// association of the additions is a function of the slice length alone.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(T::default(), |acc, &v| acc + v),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// One Gauss-Legendre panel on `[a, b]`.
pub fn panel<T: Scalar, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> T {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [T::default(); GL_ORDER];
    for (k, (&x, &w)) in r.nodes.iter().zip(&r.weights).enumerate() {
        acc[k] = f(mid + half * x) * w;
    }
    pairwise_sum(&acc) * half
}

/// Sum of per-panel rules over `panels`, reduced pairwise in order.
pub fn integrate_panels<T: Scalar, F: Fn(f64) -> T>(f: &F, panels: &[(f64, f64)]) -> T {
    let vals: Vec<T> = panels.iter().map(|&(a, b)| panel(f, a, b)).collect();
    pairwise_sum(&vals)
}

/// Split every panel in two at its midpoint.
pub fn bisect_all(panels: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(2 * panels.len());
    for &(a, b) in panels {
        let m = 0.5 * (a + b);
        out.push((a, m));
        out.push((m, b));
    }
    out
}

/// Integrate with panel doubling until two successive levels agree to
/// `tol * max(|I|, floor)`. `floor` supplies the scale for integrals whose
/// value cancels to (near) zero.
pub fn integrate_doubling<T: Scalar, F: Fn(f64) -> T>(
    f: &F,
    panels: Vec<(f64, f64)>,
    tol: f64,
    floor: f64,
    max_doublings: usize,
) -> Result<T> {
    if panels.is_empty() {
        return Ok(T::default());
    }
    let mut current = panels;
    let mut prev = integrate_panels(f, &current);
    for _ in 0..max_doublings {
        if 2 * current.len() > MAX_PANELS {
            break;
        }
        current = bisect_all(&current);
        let next = integrate_panels(f, &current);
        let diff = (next + prev * -1.0).magnitude();
        if diff <= tol * next.magnitude().max(floor) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NotConverged(format!(
        "panel doubling stalled at {} panels",
        current.len()
    )))
}

/// Break `[lo, hi]` at the given interior points (sorted, deduplicated).
pub fn split_at_points(lo: f64, hi: f64, points: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut a = lo;
    for c in cuts {
        out.push((a, c));
        a = c;
    }
    if hi > a {
        out.push((a, hi));
    }
    out
}

/// Uniform subdivision so that no panel is wider than `max_width`.
pub fn uniform_panels(lo: f64, hi: f64, max_width: f64) -> Vec<(f64, f64)> {
    if hi <= lo {
        return Vec::new();
    }
    let n = ((hi - lo) / max_width).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..n)
        .map(|i| {
            let a = lo + h * i as f64;
            let b = if i + 1 == n { hi } else { lo + h * (i + 1) as f64 };
            (a, b)
        })
        .collect()
}

/// Adaptive real integral on a finite interval with optional break points.
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    max_width: f64,
    tol: f64,
) -> Result<f64> {
    let panels: Vec<(f64, f64)> = split_at_points(lo, hi, breaks)
        .into_iter()
        .flat_map(|(a, b)| uniform_panels(a, b, max_width))
        .collect();
    integrate_doubling(&f, panels, tol, 0.0, 12)
}
