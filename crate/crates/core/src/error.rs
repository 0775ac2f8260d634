use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violated an operation's precondition. The message names it.
    #[error("{0}")]
    InvalidParameter(String),
    #[error("support required: spectrum has no finite support")]
    SupportRequired,
    #[error("k_max too small: spectrum extends to |xi| = {extent}, beyond 2^{k_max}")]
    KMaxTooSmall { k_max: u32, extent: f64 },
    #[error("use wsp_norm: gagliardo seminorm needs 0 < s < 1, got s = {0}")]
    UseWspNorm(f64),
    #[error("derivatives unavailable: sampled input only supports 0 < s < 1")]
    DerivativesUnavailable,
    #[error("ratio undefined for the zero function")]
    RatioUndefined,
    #[error("construction requires gamma > 1, got {0}")]
    GammaTooSmall(f64),
    #[error("outside lattice regime: t = {t} must be below lambda^(-1/beta) = {limit}")]
    OutsideLatticeRegime { t: f64, limit: f64 },
    #[error("outside ball: |x| = {0} must be below 1/1000")]
    OutsideBall(f64),
    #[error("x = {x} outside the pinned interval (0, {upper}]")]
    OutsidePinnedInterval { x: f64, upper: f64 },
    #[error("all below noise floor: no error sample exceeds {0:e}")]
    BelowNoiseFloor(f64),
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("spectrum does not decay: {0}")]
    NoDecay(String),
    #[error("quadrature did not converge: {0}")]
    NotConverged(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Fails with `"<name> must be finite"` on NaN or infinities.
pub(crate) fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be finite")))
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<f64> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be positive")))
    }
}
