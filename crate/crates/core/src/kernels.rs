//! Poisson kernels of subordinated circular pseudoprocesses.

use std::f64::consts::{FRAC_2_PI, PI, TAU};

use crate::error::{ensure, Error, Result};
use crate::line::{cauchy_skewed_density, OrderParams};
use crate::quad;
use crate::specfun::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelParity {
    Even,
    Odd(u32),
}

/// Damping `a` and rotation `b` of a kernel at time `t`; `a = 1, b = 0` for
/// the even kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub parity: KernelParity,
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl KernelParams {
    pub fn even(t: f64) -> Result<Self> {
        check_t(t)?;
        Ok(Self { parity: KernelParity::Even, t, a: 1.0, b: 0.0 })
    }

    pub fn odd(n: u32, t: f64) -> Result<Self> {
        check_t(t)?;
        let o = OrderParams::odd(n)?;
        Ok(Self { parity: KernelParity::Odd(n), t, a: o.a, b: o.b })
    }

    /// `(1/2π)(1 − r²)/(1 + r² − 2r cos(θ + bt))` with `r = e^{−at}`.
    pub fn density(&self, theta: f64) -> f64 {
        let r = (-self.a * self.t).exp();
        // 1 − r² and 1 + r² − 2r cos φ = (1 − r)² + 4r sin²(φ/2), both without cancellation.
        let num = -(-2.0 * self.a * self.t).exp_m1();
        let h = (0.5 * (theta + self.b * self.t)).sin();
        num / (TAU * ((1.0 - r).powi(2) + 4.0 * r * h * h))
    }

    /// `1/(2π) + (1/π) Σ e^{−akt} cos(k(θ + bt))`.
    pub fn series(&self, theta: f64, tol: Tolerance) -> Result<f64> {
        let r = (-self.a * self.t).exp();
        let phi = theta + self.b * self.t;
        let mut s = 1.0 / TAU;
        let mut rk = 1.0;
        for k in 1..=tol.max_terms {
            rk *= r;
            s += rk * (k as f64 * phi).cos() / PI;
            if rk / (PI * (1.0 - r)) < 0.01 * tol.abs_tol {
                return Ok(s);
            }
        }
        Err(Error::Truncation(format!("kernel series at t = {} needs more than {} terms", self.t, tol.max_terms)))
    }
}

fn check_t(t: f64) -> Result<()> {
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))
}

fn check_angle(theta: f64) -> Result<()> {
    ensure((0.0..TAU).contains(&theta), || format!("theta must lie in [0, 2π), got {theta}"))
}

pub fn even_kernel_density(theta: f64, t: f64) -> Result<f64> {
    Ok(KernelParams::even(t)?.density(theta))
}

/// `(1/π) arctan(coth(t/2) tan(θ/2))`, plus 1 on `(π, 2π)`; `1/2` at `π`.
pub fn even_kernel_cdf(theta: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    check_angle(theta)?;
    if theta == PI {
        return Ok(0.5);
    }
    let c = 1.0 / (0.5 * t).tanh();
    let v = (c * (0.5 * theta).tan()).atan() / PI;
    Ok(if theta < PI { v } else { 1.0 + v })
}

/// `P(−π/2 < Θ < π/2) = 1/2 + (2/π) arctan e^{−t}`.
pub fn even_quadrant_prob(t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(0.5 + FRAC_2_PI * (-t).exp().atan())
}

pub fn odd_kernel_density(n: u32, theta: f64, t: f64) -> Result<f64> {
    Ok(KernelParams::odd(n, t)?.density(theta))
}

/// Odd-kernel CDF by adaptive quadrature of the density; authoritative on all of `[0, 2π)`.
pub fn odd_kernel_cdf(n: u32, theta: f64, t: f64) -> Result<f64> {
    check_angle(theta)?;
    let k = KernelParams::odd(n, t)?;
    let mode = (-k.b * t).rem_euclid(TAU);
    let mut cuts = vec![0.0];
    if mode > 0.0 && mode < theta {
        cuts.push(mode);
    }
    cuts.push(theta);
    let mut s = 0.0;
    for w in cuts.windows(2) {
        s += quad::integrate(|x| k.density(x), w[0], w[1], 1e-14, 10_000)?.value;
    }
    Ok(s)
}

/// Piecewise arctan form of the odd-kernel CDF.
///
/// Uses `(1/π)[arctan(C tan((θ+bt)/2)) − arctan(C tan(bt/2))]`, `C = coth(at/2)`,
/// while `θ + bt < π`, and one plus that expression beyond. Angles with
/// `θ ≥ 2π − bt/2` fall outside the published branches and give `DomainGap`.
pub fn odd_kernel_cdf_piecewise(n: u32, theta: f64, t: f64) -> Result<f64> {
    check_angle(theta)?;
    let k = KernelParams::odd(n, t)?;
    let bt = k.b * t;
    if theta >= TAU - 0.5 * bt {
        return Err(Error::DomainGap(format!(
            "θ = {theta} lies beyond 2π − bt/2 = {}; use odd_kernel_cdf",
            TAU - 0.5 * bt
        )));
    }
    let c = 1.0 / (0.5 * k.a * t).tanh();
    let g = |phi: f64| (c * (0.5 * phi).tan()).atan() / PI;
    let base = g(theta + bt) - g(bt);
    Ok(if theta + bt < PI { base } else { 1.0 + base })
}

/// Single-arctan form of the odd-kernel CDF,
/// `(1/π) arctan[(1−r²) T (1+s²) / ((1−r)² + 4rTs + (1+r)² s²)]` with
/// `T = tan(θ/2)`, `s = tan(bt/2)`, `r = e^{−at}`, on the branch that keeps the
/// angle in `[0, 2π)`. Numerator and denominator are scaled by `cos(θ/2)` so
/// `θ = π` needs no special case.
pub fn odd_kernel_cdf_arctan(n: u32, theta: f64, t: f64) -> Result<f64> {
    check_angle(theta)?;
    let k = KernelParams::odd(n, t)?;
    let r = (-k.a * t).exp();
    let half = 0.5 * k.b * t;
    let (s, sgn) = (half.tan(), half.cos().signum());
    let (sh, ch) = (0.5 * theta).sin_cos();
    let num = sgn * (1.0 - r * r) * (1.0 + s * s) * sh;
    let den = sgn * (((1.0 - r).powi(2) + (1.0 + r).powi(2) * s * s) * ch + 4.0 * r * s * sh);
    Ok(num.atan2(den).rem_euclid(TAU) / PI)
}

/// Alternative closed form on `[0, π]`:
/// `(1/π) arctan[sinh(at) T / (cosh(at) − cos(bt) + sin(bt) T)]`.
pub fn odd_kernel_cdf_upper_half(n: u32, theta: f64, t: f64) -> Result<f64> {
    ensure((0.0..=PI).contains(&theta), || format!("theta must lie in [0, π], got {theta}"))?;
    let k = KernelParams::odd(n, t)?;
    let (at, bt) = (k.a * t, k.b * t);
    let (sh, ch) = (0.5 * theta).sin_cos();
    let num = at.sinh() * sh;
    let den = (at.cosh() - bt.cos()) * ch + bt.sin() * sh;
    Ok(num.atan2(den) / PI)
}

/// `P(0 < Θ < π) = (1/π) arctan(sinh(at) / sin(bt))`, on the branch in `(0, 1)`.
pub fn odd_half_circle_prob(n: u32, t: f64) -> Result<f64> {
    let k = KernelParams::odd(n, t)?;
    Ok((k.a * t).sinh().atan2((k.b * t).sin()) / PI)
}

/// The three algebraic forms of `P(0 < Θ < π/2)`.
pub fn odd_quadrant_forms(n: u32, t: f64) -> Result<[f64; 3]> {
    let k = KernelParams::odd(n, t)?;
    let (at, bt) = (k.a * t, k.b * t);
    let r = (-at).exp();
    let s = (0.5 * bt).tan();
    let first = ((1.0 - r * r) * (1.0 + s * s)).atan2((1.0 - r).powi(2) + 4.0 * r * s + (1.0 + r).powi(2) * s * s);
    let second = at.sinh().atan2(
        2.0 * (0.5 * at).sinh().powi(2) * (0.5 * bt).cos().powi(2)
            + bt.sin()
            + 2.0 * (0.5 * at).cosh().powi(2) * (0.5 * bt).sin().powi(2),
    );
    let third = at.sinh().atan2(at.cosh() - bt.cos() + bt.sin());
    Ok([first / PI, second / PI, third / PI])
}

/// `sup_θ |odd kernel − even kernel|` over a 512-point grid.
pub fn kernel_limit_gap(n: u32, t: f64) -> Result<f64> {
    let odd = KernelParams::odd(n, t)?;
    let even = KernelParams::even(t)?;
    Ok((0..512)
        .map(|i| {
            let th = TAU * i as f64 / 512.0;
            (odd.density(th) - even.density(th)).abs()
        })
        .fold(0.0, f64::max))
}

/// `Σ_m` of the skewed Cauchy density at `θ + 2πm`.
///
/// Images with `|m| ≤ M` are summed directly; the two tails are replaced by
/// the midpoint-rule integral of the Cauchy density, whose error decays like
/// `M^{−3}`.
pub fn wrapped_skewed_cauchy(n: u32, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check_t(t)?;
    let o = OrderParams::odd(n)?;
    let th = theta.rem_euclid(TAU);
    let scale = t * o.a;
    let m_max = ((scale.max(1.0) / tol.abs_tol).cbrt().ceil() as i64).max(200);
    let mut s = 0.0;
    for m in -m_max..=m_max {
        s += cauchy_skewed_density(o, th + TAU * m as f64, t)?;
    }
    let hi = th + TAU * (m_max as f64 + 0.5) + t * o.b;
    let lo = th - TAU * (m_max as f64 + 0.5) + t * o.b;
    let upper = 0.5 - (hi / scale).atan() / PI;
    let lower = 0.5 + (lo / scale).atan() / PI;
    Ok(s + (upper + lower) / TAU)
}
