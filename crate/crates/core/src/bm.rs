//! Brownian motion on the unit circle.

use std::f64::consts::{FRAC_2_PI, PI, TAU};

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::harmonic::HarmonicLaw;
use crate::specfun::{bessel_i_scaled, normal_cdf, normal_pdf, Tolerance};

fn check_t(t: f64) -> Result<()> {
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))
}

/// Law of `B(t) mod 2π` as a Fourier series, `a_k = e^{−k²t/2}/π`.
#[derive(Debug, Clone, PartialEq)]
pub struct BmLaw {
    pub t: f64,
    pub representation: HarmonicLaw,
}

impl BmLaw {
    pub fn new(t: f64, tol: Tolerance) -> Result<Self> {
        check_t(t)?;
        let (k_max, tail) = gaussian_cutoff(0.5 * t, tol)?;
        let coeffs = (1..=k_max).map(|k| (-0.5 * (k * k) as f64 * t).exp() / PI).collect();
        let representation = HarmonicLaw::cosine(coeffs, tail, tail, format!("circular BM t={t}"));
        Ok(Self { t, representation })
    }
}

/// Smallest `K` with `Σ_{k>K} e^{−k² s}/π ≤ tol`, using
/// `k² ≥ (K+1)² + 2(K+1)(k−K−1)` to bound the tail by a geometric series.
fn gaussian_cutoff(s: f64, tol: Tolerance) -> Result<(usize, f64)> {
    let env = |k: usize| {
        let j = (k + 1) as f64;
        (-j * j * s).exp() / (PI * -(-2.0 * j * s).exp_m1())
    };
    let mut k = 0;
    while env(k) > tol.abs_tol {
        k += 1;
        if k > tol.max_terms {
            return Err(Error::Truncation(format!("needs more than {} Fourier terms", tol.max_terms)));
        }
    }
    Ok((k, env(k)))
}

/// Wrapped Gaussian `Σ_m e^{−(θ+2πm)²/(2t)} / √(2πt)`.
pub fn circ_bm_density_wrapped(theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check_t(t)?;
    let th = theta.rem_euclid(TAU);
    let th = if th > PI { th - TAU } else { th };
    let norm = 1.0 / (TAU * t).sqrt();
    let mut s = norm * (-th * th / (2.0 * t)).exp();
    for m in 1.. {
        let a = norm * (-(th + TAU * m as f64).powi(2) / (2.0 * t)).exp();
        let b = norm * (-(th - TAU * m as f64).powi(2) / (2.0 * t)).exp();
        s += a + b;
        // Images beyond m are at distance ≥ (2m+1)π and decay faster than geometrically.
        let next = norm * (-((2 * m + 1) as f64 * PI).powi(2) / (2.0 * t)).exp();
        if 2.0 * next < 0.1 * tol.abs_tol || m > 100_000 {
            break;
        }
    }
    Ok(s)
}

/// Circular BM density: wrapped Gaussian for `t < 1`, Fourier series otherwise.
pub fn circ_bm_density(theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check_t(t)?;
    if t < 1.0 {
        circ_bm_density_wrapped(theta, t, tol)
    } else {
        Ok(BmLaw::new(t, tol)?.representation.eval(theta))
    }
}

/// Von Mises density `e^{κ cos θ} / (2π I_0(κ))`, evaluated as
/// `e^{κ(cos θ − 1)} / (2π e^{−κ} I_0(κ))`.
pub fn von_mises_density(theta: f64, kappa: f64) -> Result<f64> {
    ensure(kappa >= 0.0 && kappa.is_finite(), || format!("kappa must be ≥ 0, got {kappa}"))?;
    let i0 = bessel_i_scaled(0, kappa, Tolerance::default())?;
    Ok((kappa * (theta.cos() - 1.0)).exp() / (TAU * i0))
}

/// Von Mises density as the cosine series `(1/2π)(1 + 2Σ I_m(κ)/I_0(κ) cos mθ)`.
pub fn von_mises_series(theta: f64, kappa: f64) -> Result<f64> {
    ensure(kappa >= 0.0 && kappa.is_finite(), || format!("kappa must be ≥ 0, got {kappa}"))?;
    let tol = Tolerance::default();
    let i0 = bessel_i_scaled(0, kappa, tol)?;
    let mut s = 1.0;
    for m in 1..10_000u32 {
        let r = bessel_i_scaled(m, kappa, tol)? / i0;
        s += 2.0 * r * (m as f64 * theta).cos();
        if r < 1e-17 && m as f64 > kappa {
            break;
        }
    }
    Ok(s / TAU)
}

/// Concentration `κ` whose Von Mises law has mean resultant `e^{−t/2}`, and
/// the sup distance between the two densities on a 512-point grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VonMisesMatch {
    pub kappa: f64,
    pub sup_distance: f64,
}

pub fn von_mises_match(t: f64) -> Result<VonMisesMatch> {
    check_t(t)?;
    let tol = Tolerance::default();
    let target = (-0.5 * t).exp();
    let ratio = |k: f64| -> Result<f64> { Ok(bessel_i_scaled(1, k, tol)? / bessel_i_scaled(0, k, tol)?) };
    let (mut lo, mut hi) = (0.0, 1.0);
    while ratio(hi)? < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NonConvergence("concentration search diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kappa = 0.5 * (lo + hi);
    let mut sup: f64 = 0.0;
    for i in 0..512 {
        let th = TAU * i as f64 / 512.0;
        sup = sup.max((von_mises_density(th, kappa)? - circ_bm_density(th, t, tol)?).abs());
    }
    Ok(VonMisesMatch { kappa, sup_distance: sup })
}

/// `P(−π/2 < B(t) mod 2π < π/2) = 1/2 + (2/π)Σ_{k≥0} (−1)^k e^{−(2k+1)²t/2}/(2k+1)`.
pub fn bm_quadrant_prob(t: f64) -> Result<f64> {
    check_t(t)?;
    let mut s = 0.0;
    for k in 0u64.. {
        let m = (2 * k + 1) as f64;
        let term = (-0.5 * m * m * t).exp() / m;
        s += if k % 2 == 0 { term } else { -term };
        // Alternating and decreasing: the first omitted term bounds the error.
        let m2 = m + 2.0;
        if (-0.5 * m2 * m2 * t).exp() / m2 < 1e-16 {
            break;
        }
    }
    Ok(0.5 + FRAC_2_PI * s)
}

/// `1/2 + (2/π)e^{−t/2}`, an upper bound on [`bm_quadrant_prob`] for `t > −2 ln(π/4)`.
pub fn bm_quadrant_bound(t: f64) -> f64 {
    0.5 + FRAC_2_PI * (-0.5 * t).exp()
}

/// `P(a < Z < b)` for a standard normal `Z`, accurate in both tails.
fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        normal_cdf(-a) - normal_cdf(-b)
    } else if b <= 0.0 {
        normal_cdf(b) - normal_cdf(a)
    } else {
        1.0 - normal_cdf(-b) - normal_cdf(a)
    }
}

fn check_angle(theta: f64) -> Result<()> {
    ensure(theta > 0.0 && theta <= PI, || format!("theta must lie in (0, π], got {theta}"))
}

/// Sums `f(r)` over `r ∈ ℤ` outward from 0 until both sides fall below `1e-12`.
fn reflection_sum(mut f: impl FnMut(i64) -> f64) -> f64 {
    let mut s = f(0);
    for r in 1i64.. {
        let (a, b) = (f(r), f(-r));
        s += a + b;
        if (a.abs() < 1e-12 && b.abs() < 1e-12) || r > 1_000_000 {
            break;
        }
    }
    s
}

/// `P(max_{s≤t} |B(s)| < θ) = Σ_r (−1)^r P(−(1+2r)θ/√t < Z < (1−2r)θ/√t)`.
pub fn bm_maxdist_cdf(theta: f64, t: f64) -> Result<f64> {
    check_angle(theta)?;
    check_t(t)?;
    let st = t.sqrt();
    Ok(reflection_sum(|r| {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let (u, v) = ((1 - 2 * r) as f64 * theta / st, (1 + 2 * r) as f64 * theta / st);
        sign * normal_interval(-v, u)
    }))
}

/// Density of the first time `|B|` reaches `θ`, the negative `t`-derivative of
/// [`bm_maxdist_cdf`] taken term by term.
pub fn bm_first_passage_density(theta: f64, t: f64) -> Result<f64> {
    check_angle(theta)?;
    check_t(t)?;
    let st = t.sqrt();
    let pre = theta / (2.0 * t * st);
    let v = reflection_sum(|r| {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = ((1 - 2 * r) as f64, (1 + 2 * r) as f64);
        sign * pre * (a * normal_pdf(a * theta / st) + b * normal_pdf(b * theta / st))
    });
    Ok(v.max(0.0))
}
