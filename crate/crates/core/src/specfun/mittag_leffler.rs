//! One-parameter Mittag-Leffler function `E_ν(x) = Σ x^j / Γ(νj + 1)` on the
//! completely monotone branch `x ≤ 0`, `0 < ν ≤ 1`.
//!
//! Three regimes:
//! - power series, accepted only when its largest term leaves enough digits
//!   after cancellation;
//! - the algebraic asymptotic expansion `−Σ_{j≥1} x^{−j}/Γ(1−νj)`, accepted
//!   when its smallest term is below the tolerance (needs `|x| ≥ 10`);
//! - otherwise the Hankel contour collapsed onto the negative real axis,
//!   `E_ν(−s) = sin(νπ)/(νπ) ∫₀^∞ e^{−(s u)^{1/ν}} / (u² + 2u cos νπ + 1) du`.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};
use super::Tolerance;
use crate::error::{ensure, Error, Result};
use crate::quad;

pub fn mittag_leffler(nu: f64, x: f64, tol: Tolerance) -> Result<f64> {
    ensure(nu > 0.0 && nu <= 1.0, || format!("nu must lie in (0, 1], got {nu}"))?;
    ensure(x <= 0.0 && x.is_finite(), || format!("x must be finite and ≤ 0, got {x}"))?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if nu == 1.0 {
        return Ok(x.exp());
    }
    if let Some(v) = series(nu, x, tol) {
        return Ok(v);
    }
    if -x >= 10.0 {
        if let Some(v) = asymptotic(nu, x, tol) {
            return Ok(v);
        }
    }
    contour(nu, -x, tol)
}

fn series(nu: f64, x: f64, tol: Tolerance) -> Option<f64> {
    let lx = (-x).ln();
    let mut sum = 0.0;
    let mut max_term: f64 = 0.0;
    let mut prev = f64::INFINITY;
    for j in 0..tol.max_terms {
        let mag = (j as f64 * lx - ln_gamma(nu * j as f64 + 1.0)).exp();
        let term = if j % 2 == 0 { mag } else { -mag };
        sum += term;
        max_term = max_term.max(mag);
        // Cancellation budget: ~8 ulps of the largest partial term.
        if max_term * 2.0e-15 > 0.1 * tol.abs_tol {
            return None;
        }
        if mag < prev && mag < 1e-3 * tol.abs_tol && mag <= f64::EPSILON * sum.abs() + 1e-300 {
            return Some(sum);
        }
        if mag < prev && mag < 1e-18 {
            return Some(sum);
        }
        prev = mag;
    }
    None
}

fn asymptotic(nu: f64, x: f64, tol: Tolerance) -> Option<f64> {
    let s = -x;
    let mut sum = 0.0;
    let mut last_nonzero = f64::INFINITY;
    for j in 1..200 {
        let r = rgamma(1.0 - nu * j as f64);
        if r == 0.0 {
            continue;
        }
        // −x^{−j} = −(−1)^j s^{−j}
        let term = -(if j % 2 == 0 { 1.0 } else { -1.0 }) * s.powi(-j) * r;
        if term.abs() > last_nonzero {
            // Terms started growing: the expansion cannot reach tol.
            return None;
        }
        if term.abs() < 0.05 * tol.abs_tol {
            return Some(sum);
        }
        sum += term;
        last_nonzero = term.abs();
    }
    None
}

fn contour(nu: f64, s: f64, tol: Tolerance) -> Result<f64> {
    let c = (nu * PI).cos();
    let pref = (nu * PI).sin() / (nu * PI);
    let f = |u: f64| (-(s * u).powf(1.0 / nu)).exp() / (u * u + 2.0 * u * c + 1.0);
    let itol = 0.05 * tol.abs_tol / pref.max(1e-300);
    let peak = (-c).max(0.0);
    let mut total = 0.0;
    let mut lo = 0.0;
    for hi in [peak, 2.0 * peak + 1.0] {
        if hi > lo {
            total += quad::integrate(f, lo, hi, itol / 3.0, 20_000)?.value;
            lo = hi;
        }
    }
    total += quad::integrate_to_infinity(f, lo, itol / 3.0)?.value;
    let v = pref * total;
    if !v.is_finite() {
        return Err(Error::NonConvergence(format!("Mittag-Leffler contour failed at nu={nu}, x=-{s}")));
    }
    Ok(v)
}
