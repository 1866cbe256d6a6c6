//! Special functions shared by every law in the crate.

mod airy;
mod bessel;
mod gamma;
mod gengamma;
mod mittag_leffler;
pub(crate) mod oscillatory;

pub use airy::airy_ai;
pub use bessel::{bessel_i, bessel_i_scaled};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use gengamma::{gen_gamma_density, gen_gamma_tail, GenGammaParams};
pub use mittag_leffler::mittag_leffler;

use crate::error::{ensure, Result};

/// Accuracy request passed to series and quadrature evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_terms: 1_000_000 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        ensure(abs_tol > 0.0 && abs_tol.is_finite(), || {
            format!("abs_tol must be positive, got {abs_tol}")
        })?;
        ensure(max_terms >= 1, || "max_terms must be at least 1".into())?;
        Ok(Self { abs_tol, max_terms })
    }

    pub fn with_abs(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}
