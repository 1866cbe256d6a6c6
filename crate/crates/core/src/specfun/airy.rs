use super::oscillatory::fourier_power;
use super::Tolerance;
use crate::error::{Error, Result};

/// Airy function `Ai(x) = (1/π) ∫₀^∞ cos(xξ + ξ³/3) dξ`, for `|x| ≤ 10⁴`.
pub fn airy_ai(x: f64, tol: Tolerance) -> Result<f64> {
    if !(x.is_finite() && x.abs() <= 1e4) {
        return Err(Error::NonConvergence(format!("Airy argument outside |x| <= 1e4: {x}")));
    }
    fourier_power(x, 1.0 / 3.0, 3, tol.abs_tol)
}
