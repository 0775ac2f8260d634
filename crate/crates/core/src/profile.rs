//! The smooth transition ramp shared by the counterexample bump, the
//! low-pass cutoff and the dyadic partition of unity.

/// `T(u) = exp(1 - 1/(1 - u^2))` on `(0, 1)`, extended by 1 for `u <= 0` and
/// 0 for `u >= 1`. Monotone decreasing, C-infinity.
pub fn transition(u: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Even C-infinity bump: 1 on `|w| <= 1/2`, 0 on `|w| >= 1`, and
/// `T(2|w| - 1)` in between.
pub fn bump(omega: f64) -> f64 {
    let a = omega.abs();
    if a <= 0.5 {
        1.0
    } else if a >= 1.0 {
        0.0
    } else {
        transition(2.0 * a - 1.0)
    }
}

/// Points where the bump switches between plateau, ramp and exterior.
pub(crate) const BUMP_KNOTS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];
