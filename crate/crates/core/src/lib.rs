//! Numerics for the Landau-type dispersive-dissipative propagator
//! `exp(it|D|^a - t^gamma |D|^a)`: spectral data, oscillatory quadrature,
//! pointwise propagation along curves, fractional Sobolev norms, the
//! divergence and sharpness constructions, and convergence-rate fits.

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod error;
pub mod profile;
pub mod propagator;
pub mod quad;
pub mod rates;
pub mod sobolev;
pub mod spectral;

pub use error::{Error, Result};
