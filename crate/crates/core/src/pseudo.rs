//! Wrapped even- and odd-order pseudoprocess laws on the circle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::harmonic::HarmonicLaw;
use crate::line::{u_even, u_odd, OrderParams};
use crate::quad;
use crate::sim::RngStream;
use crate::specfun::Tolerance;

fn check(n: u32, t: f64) -> Result<()> {
    ensure(n >= 1, || format!("n must be at least 1, got {n}"))?;
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))
}

/// Smallest `K` whose geometric envelope `e^{−(K+1)t}/(π(1−e^{−t}))` is below `tol`.
pub(crate) fn geometric_cutoff(t: f64, tol: Tolerance) -> Result<(usize, f64)> {
    let env = |k: f64| (-(k + 1.0) * t).exp() / (PI * -(-t).exp_m1());
    let k = ((-(tol.abs_tol * PI * -(-t).exp_m1()).ln() / t) - 1.0).ceil().max(0.0);
    if k > tol.max_terms as f64 {
        return Err(Error::Truncation(format!(
            "t = {t} needs {k} Fourier terms, cap is {}; use the wrapped route",
            tol.max_terms
        )));
    }
    let mut k = k as usize;
    while k > 0 && env((k - 1) as f64) <= tol.abs_tol {
        k -= 1;
    }
    Ok((k, env(k as f64)))
}

/// `1/(2π) + (1/π) Σ e^{−k^{2n} t} cos kθ`.
pub fn v_even(n: u32, t: f64, tol: Tolerance) -> Result<HarmonicLaw> {
    check(n, t)?;
    let (k_max, tail) = geometric_cutoff(t, tol)?;
    let p = 2 * n as i32;
    let coeffs: Vec<f64> = (1..=k_max).map(|k| (-(k as f64).powi(p) * t).exp() / PI).collect();
    Ok(HarmonicLaw::cosine(coeffs, tail, tail, format!("v_even n={n} t={t}")))
}

/// `(1/2π)∫|e^{−(ξ−iη)^{2n} t}| dξ`, which bounds `|u_{2n}(x,t)| e^{η|x|}`.
fn strip_bound(n: u32, t: f64, eta: f64) -> Result<f64> {
    let p = 2 * n as i32;
    let expo = |xi: f64| -t * Complex64::new(xi, -eta).powi(p).re;
    // Factor out the peak so the quadrature works at relative accuracy.
    let peak = (0..=400).map(|i| expo(i as f64 * eta * 0.01)).fold(f64::NEG_INFINITY, f64::max);
    if peak > 700.0 {
        return Ok(f64::INFINITY);
    }
    let f = |xi: f64| (expo(xi) - peak).exp();
    let scaled = quad::integrate_to_infinity(f, 0.0, 1e-9)?;
    Ok(peak.exp() * (scaled.value + scaled.error + 1e-9) / PI)
}

/// `Σ_m u_{2n}(θ + 2πm, t)`, truncated with the strip bound on `u_{2n}`.
pub fn v_even_wrapped(n: u32, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check(n, t)?;
    ensure(theta.is_finite(), || "theta must be finite".into())?;
    let ord = OrderParams::even(n)?;
    let th = theta.rem_euclid(TAU);
    let th = if th > PI { th - TAU } else { th };
    // |θ + 2πm| ≥ (2|m| − 1)π, so the tail past M is at most
    // 2B e^{−η(2M+1)π} / (1 − e^{−2πη}).
    let mut best: Option<usize> = None;
    for &eta in &[0.5, 1.0, 2.0, 4.0] {
        let b = strip_bound(n, t, eta)?;
        if !b.is_finite() {
            continue;
        }
        let need = 0.5 * tol.abs_tol * (1.0 - (-TAU * eta).exp()) / (2.0 * b);
        let m = (((-need.ln()) / (eta * PI) - 1.0) / 2.0).ceil().max(0.0) as usize;
        best = Some(best.map_or(m, |x: usize| x.min(m)));
    }
    let m_max = best.ok_or_else(|| Error::NonConvergence(format!("no usable strip bound at t = {t}")))?;
    if m_max > 10_000 {
        return Err(Error::NonConvergence(format!("wrapped sum at t = {t} needs {m_max} images")));
    }
    let each = Tolerance::with_abs(0.5 * tol.abs_tol / (2 * m_max + 1) as f64);
    let mut s = 0.0;
    for m in -(m_max as i64)..=(m_max as i64) {
        s += u_even(ord, th + TAU * m as f64, t, each)?;
    }
    Ok(s)
}

/// Window width multiples used by the regularized odd-order wrap.
const ODD_WINDOW: f64 = 12.0 * PI;
const ODD_WINDOW_CUT: f64 = 8.0;
const ODD_FLAG: f64 = 1e-4;

/// Both readings of an odd-order circular law at one angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OddReading {
    pub wrapped: f64,
    pub abel_series: f64,
    pub discrepancy: f64,
    pub flagged: bool,
}

/// Odd-order circular law at `θ`.
///
/// Its Fourier coefficients `cos(k^{2n+1}t)/π`, `−sin(k^{2n+1}t)/π` do not
/// decay, so both readings are regularized sums:
/// - `wrapped`: `Σ_m W((θ+2πm)/L) u_{2n+1}(θ+2πm, t)` with a Gaussian window
///   `W`, extrapolated in `L` by `(4 S_{2L} − S_L)/3`;
/// - `abel_series`: `1/(2π) + (1/π)Σ e^{−εk} cos(k^{2n+1}t + kθ)` at
///   `ε ∈ {0.02, 0.01, 0.005}` with two Richardson steps.
///
/// `flagged` marks a discrepancy above `1e-4`.
pub fn v_odd(n: u32, theta: f64, t: f64, tol: Tolerance) -> Result<OddReading> {
    check(n, t)?;
    ensure(theta.is_finite(), || "theta must be finite".into())?;
    let wrapped = v_odd_wrapped(n, theta, t, tol)?;
    let abel_series = abel_extrapolated(2 * n + 1, theta.rem_euclid(TAU), t, tol);
    let discrepancy = (wrapped - abel_series).abs();
    Ok(OddReading { wrapped, abel_series, discrepancy, flagged: discrepancy > ODD_FLAG })
}

/// The `wrapped` reading of [`v_odd`] alone.
pub fn v_odd_wrapped(n: u32, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    check(n, t)?;
    ensure(theta.is_finite(), || "theta must be finite".into())?;
    let ord = OrderParams::odd(n)?;
    let th = theta.rem_euclid(TAU);
    let s1 = windowed_wrap(ord, th, t, ODD_WINDOW, tol)?;
    let s2 = windowed_wrap(ord, th, t, 2.0 * ODD_WINDOW, tol)?;
    Ok((4.0 * s2 - s1) / 3.0)
}

fn windowed_wrap(ord: OrderParams, th: f64, t: f64, width: f64, tol: Tolerance) -> Result<f64> {
    let reach = ODD_WINDOW_CUT * width;
    let lo = ((-reach - th) / TAU).ceil() as i64;
    let hi = ((reach - th) / TAU).floor() as i64;
    let each = Tolerance::with_abs((0.1 * tol.abs_tol / (hi - lo + 1) as f64).max(1e-15));
    let mut s = 0.0;
    for m in lo..=hi {
        let x = th + TAU * m as f64;
        let w = (-0.5 * (x / width).powi(2)).exp();
        s += w * u_odd(ord, x, t, each)?;
    }
    Ok(s)
}

/// `k^p t` reduced modulo `2π` without losing the fractional turns.
fn phase_mod_tau(kp: u128, t: f64) -> f64 {
    const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;
    const TAU_LO2: f64 = -5.989_539_619_436_679e-33;
    let mut r = 0.0;
    let mut rest = kp;
    let mut shift = 0u32;
    while rest > 0 {
        let chunk = (rest & ((1 << 26) - 1)) as f64 * 2f64.powi(shift as i32);
        let hi = chunk * t;
        let lo = chunk.mul_add(t, -hi);
        let q = (hi / TAU).round();
        r += q.mul_add(-TAU, hi) - q * TAU_LO - q * TAU_LO2 + lo;
        r = r.rem_euclid(TAU);
        rest >>= 26;
        shift += 26;
    }
    r
}

fn abel_sum(p: u32, th: f64, t: f64, eps: f64, tol: Tolerance) -> f64 {
    // Tail of Σ e^{−εk}/π beyond K is e^{−ε(K+1)}/(π(1 − e^{−ε})).
    let k_max = ((-(0.01 * tol.abs_tol * PI * -(-eps).exp_m1()).ln()) / eps).ceil() as u64;
    let mut s = 1.0 / TAU;
    for k in 1..=k_max {
        let kp = (k as u128).pow(p);
        let ph = phase_mod_tau(kp, t) + (k as f64 * th).rem_euclid(TAU);
        s += (-eps * k as f64).exp() * ph.cos() / PI;
    }
    s
}

fn abel_extrapolated(p: u32, th: f64, t: f64, tol: Tolerance) -> f64 {
    let a = abel_sum(p, th, t, 0.02, tol);
    let b = abel_sum(p, th, t, 0.01, tol);
    let c = abel_sum(p, th, t, 0.005, tol);
    let r1 = 2.0 * b - a;
    let r2 = 2.0 * c - b;
    (4.0 * r2 - r1) / 3.0
}

/// `v_{2n}(π, t) = 1/(2π) + (1/π) Σ (−1)^k e^{−k^{2n} t}`.
pub fn min_value(n: u32, t: f64) -> Result<f64> {
    check(n, t)?;
    let tol = Tolerance::with_abs(1e-13);
    let (k_max, _) = geometric_cutoff(t, tol)?;
    let p = 2 * n as i32;
    let mut s = 1.0 / TAU;
    for k in 1..=k_max {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * (-(k as f64).powi(p) * t).exp() / PI;
    }
    Ok(s)
}

/// Time after which the even-order law stays nonnegative, with the angle of
/// its minimum there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityTime {
    pub t_bar: f64,
    pub min_theta: f64,
}

const POS_GRID: usize = 4096;

/// Global minimum of a law over the circle: grid scan plus golden-section polish.
pub(crate) fn law_extremum(law: &HarmonicLaw, maximize: bool) -> (f64, f64) {
    let sgn = if maximize { -1.0 } else { 1.0 };
    let h = TAU / POS_GRID as f64;
    let (mut best_i, mut best_v) = (0, f64::INFINITY);
    for i in 0..POS_GRID {
        let v = sgn * law.eval(i as f64 * h);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = ((best_i as f64 - 1.0) * h, (best_i as f64 + 1.0) * h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |x: f64| sgn * law.eval(x);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x).min(best_v);
    (x.rem_euclid(TAU), sgn * v)
}

/// `inf{t : min_θ v_{2n}(θ, s) ≥ 0 for all s ≥ t}`, to within `1e-6`.
///
/// Scans downward from `t = 2` in steps of `0.01` until the grid minimum
/// turns negative, then bisects. Fails with a diagnostic if the minimum at
/// the returned time is not at `θ = π`.
pub fn positivity_time(n: u32, tol: Tolerance) -> Result<PositivityTime> {
    ensure(n >= 1, || format!("n must be at least 1, got {n}"))?;
    if n == 1 {
        return Ok(PositivityTime { t_bar: 0.0, min_theta: PI });
    }
    let min_at = |t: f64| -> Result<(f64, f64)> { Ok(law_extremum(&v_even(n, t, tol)?, false)) };
    let mut hi = 2.0;
    while min_at(hi)?.1 < 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NonConvergence("law never becomes nonnegative".into()));
        }
    }
    let mut lo = hi - 0.01;
    while min_at(lo)?.1 >= 0.0 {
        hi = lo;
        lo -= 0.01;
        if lo <= 1e-3 {
            return Err(Error::NonConvergence("no negative phase found above t = 1e-3".into()));
        }
    }
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if min_at(mid)?.1 >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (theta, _) = min_at(hi)?;
    if (theta - PI).abs() > 1e-3 {
        return Err(Error::Diagnostic(format!("minimum at t = {hi} sits at θ = {theta}, not π")));
    }
    Ok(PositivityTime { t_bar: hi, min_theta: theta })
}

/// Rejection sampler for a law verified nonnegative on a 4096-point grid.
#[derive(Debug, Clone)]
pub struct LawSampler {
    law: HarmonicLaw,
    envelope: f64,
}

impl LawSampler {
    pub fn new(law: &HarmonicLaw) -> Result<Self> {
        ensure(law.tail_bound.is_finite(), || "law has no pointwise density bound".into())?;
        let h = TAU / POS_GRID as f64;
        if let Some(i) = (0..POS_GRID).find(|&i| law.eval(i as f64 * h) < 0.0) {
            return Err(Error::SignedLaw(format!(
                "density is negative at θ = {} ({})",
                i as f64 * h,
                law.meta
            )));
        }
        let (_, max) = law_extremum(law, true);
        Ok(Self { law: law.clone(), envelope: (max + law.tail_bound) * 1.001 })
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        loop {
            let th = TAU * rng.uniform();
            if rng.uniform() * self.envelope < self.law.eval(th) {
                return th;
            }
        }
    }
}

/// One draw from `law`; see [`LawSampler`] for repeated draws.
pub fn sample(law: &HarmonicLaw, rng: &mut RngStream) -> Result<f64> {
    Ok(LawSampler::new(law)?.sample(rng))
}
