use crate::error::{ensure, Error, Result};

use super::gamma::ln_gamma;
use super::Tolerance;

/// Modified Bessel function `I_m(x) = Σ_j (x/2)^{2j+m} / (j! Γ(m+j+1))`.
pub fn bessel_i(m: u32, x: f64, tol: Tolerance) -> Result<f64> {
    let v = series(m, x, 0.0, tol)?;
    if !v.is_finite() {
        return Err(Error::Overflow(format!("I_{m}({x}) exceeds f64 range")));
    }
    Ok(v)
}

/// `e^{−x} I_m(x)`, summed in log space so it stays finite for large `x`.
pub fn bessel_i_scaled(m: u32, x: f64, tol: Tolerance) -> Result<f64> {
    series(m, x, x, tol)
}

fn series(m: u32, x: f64, shift: f64, tol: Tolerance) -> Result<f64> {
    ensure(x >= 0.0 && x.is_finite(), || format!("x must be finite and ≥ 0, got {x}"))?;
    if x == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let lh = (0.5 * x).ln();
    let mf = m as f64;
    let mut sum = 0.0;
    let mut prev = 0.0;
    for j in 0..tol.max_terms {
        let jf = j as f64;
        let lt = (2.0 * jf + mf) * lh - ln_gamma(jf + 1.0) - ln_gamma(mf + jf + 1.0) - shift;
        let term = lt.exp();
        sum += term;
        // Past the peak the terms shrink geometrically.
        if term < prev && (term <= 1e-17 * sum || term < 1e-3 * tol.abs_tol * 1e-6) {
            return Ok(sum);
        }
        prev = term;
    }
    Err(Error::NonConvergence(format!("Bessel series for I_{m}({x}) did not converge")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    // Series summed in plain arithmetic to machine precision.
    fn oracle(m: u32, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(m as i32) / (1..=m).fold(1.0, |a, k| a * k as f64);
        let mut s = term;
        for j in 1..200 {
            term *= 0.25 * x * x / (j as f64 * (j + m) as f64);
            s += term;
        }
        s
    }

    #[test]
    fn examples() {
        assert_eq!(bessel_i(0, 0.0, tol()).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0, tol()).unwrap(), 0.0);
        assert!((bessel_i(0, 1.0, tol()).unwrap() - oracle(0, 1.0)).abs() < 1e-14);
        assert!((oracle(0, 1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
    }

    #[test]
    fn recurrence_holds() {
        for m in 1..6u32 {
            for &x in &[0.3, 1.0, 4.0, 11.0] {
                let lhs = bessel_i(m - 1, x, tol()).unwrap() - bessel_i(m + 1, x, tol()).unwrap();
                let rhs = 2.0 * m as f64 / x * bessel_i(m, x, tol()).unwrap();
                assert!((lhs - rhs).abs() < 1e-8 * rhs.abs().max(1.0), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn scaled_is_finite_for_large_argument() {
        let v = bessel_i_scaled(0, 2000.0, tol()).unwrap();
        // e^{−x} I_0(x) ≈ 1/√(2πx) (1 + 1/(8x))
        let asym = 1.0 / (2.0 * std::f64::consts::PI * 2000.0).sqrt() * (1.0 + 1.0 / 16000.0);
        assert!((v - asym).abs() < 1e-9);
        assert!(matches!(bessel_i(0, 800.0, tol()), Err(Error::Overflow(_))));
    }
}
