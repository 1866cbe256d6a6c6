//! `(1/π) ∫₀^∞ cos(xξ + tξ^p) dξ` by contour deformation.
//!
//! For `x ≥ 0` the path is the ray `ξ = s e^{iφ}`, `φ = π/(2p)`, on which
//! `tξ^p` becomes `i t s^p` and the integrand decays like `e^{−t s^p}`.
//! For `x < 0` the phase has a real saddle at
//! `ξ₀ = (|x| / (p t))^{1/(p−1)}`; the path runs straight from the origin to
//! `ξ₀ − ξ₀ e^{iφ}` and then along `ξ₀ + r e^{iφ}`, crossing the saddle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::quad;

const MAX_PIECES: usize = 200_000;

pub(crate) fn fourier_power(x: f64, t: f64, p: u32, tol: f64) -> Result<f64> {
    ensure(p >= 2, || format!("power must be at least 2, got {p}"))?;
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))?;
    ensure(x.is_finite(), || format!("x must be finite, got {x}"))?;
    let pf = p as f64;
    let phi = PI / (2.0 * pf);
    let dir = Complex64::from_polar(1.0, phi);
    if x >= 0.0 {
        let g = |s: f64| dir * (Complex64::i() * x * s * dir - t * s.powf(pf)).exp();
        let scale = t.powf(-1.0 / pf).min(if x > 0.0 { 1.0 / (x * phi.sin()) } else { f64::INFINITY });
        let v = integrate_path(g, 0.0, None, scale, tol * PI)?;
        return Ok(v / PI);
    }
    let xi0 = (-x / (pf * t)).powf(1.0 / (pf - 1.0));
    // Overall phase at the saddle, factored out of both pieces.
    let phase0 = x * xi0 * (1.0 - 1.0 / pf);
    let rot = Complex64::from_polar(1.0, phase0);
    let corner = xi0 * (1.0 - dir);
    let seg = |lam: f64| {
        let z = lam * corner;
        let e = Complex64::i() * (x * z + t * z.powu(p)) - Complex64::i() * phase0;
        rot * corner * e.exp()
    };
    // Taylor expansion about the saddle is exact for integer p and avoids
    // cancelling large phases.
    let binom: Vec<f64> = (0..=p).scan(1.0, |c, k| {
        let out = *c;
        *c = *c * (pf - k as f64) / (k as f64 + 1.0);
        Some(out)
    }).collect();
    let line = |r: f64| {
        let w = r * dir;
        let mut poly = Complex64::new(0.0, 0.0);
        let mut wk = w * w;
        for (k, &bk) in binom.iter().enumerate().take(p as usize + 1).skip(2) {
            poly += bk * xi0.powi(p as i32 - k as i32) * wk;
            wk *= w;
        }
        rot * dir * (Complex64::i() * t * poly).exp()
    };
    let curv = (pf * (pf - 1.0) * t * xi0.powf(pf - 2.0)).sqrt();
    let scale = (1.0 / curv).min(t.powf(-1.0 / pf));
    let a = integrate_path(seg, 0.0, Some(1.0), scale / (xi0 + scale), 0.5 * tol * PI)?;
    let b = integrate_path(line, -xi0, None, scale, 0.5 * tol * PI)?;
    Ok((a + b) / PI)
}

/// Integrates `Re g` from `a` to `b` (or to where `|g|` has died out).
///
/// The path is first sampled with a step that keeps the phase and log-modulus
/// changes small; the samples cut it into pieces of a few oscillations each,
/// which then go to adaptive Gauss–Kronrod.
fn integrate_path<G: Fn(f64) -> Complex64>(
    g: G,
    a: f64,
    b: Option<f64>,
    scale: f64,
    tol: f64,
) -> Result<f64> {
    let mut h = (scale / 16.0).max(1e-300);
    let mut s = a;
    let mut cur = g(s);
    let mut cuts = vec![a];
    let mut turned = 0.0;
    let mut peak = cur.norm();
    let mut quiet = 0usize;
    let eps = tol * 1e-4;
    loop {
        if let Some(end) = b {
            if s >= end {
                break;
            }
            h = h.min(end - s);
        }
        let next_s = s + h;
        let next = g(next_s);
        let dphase = (next / cur).arg().abs();
        let dmod = (next.norm().max(1e-300) / cur.norm().max(1e-300)).ln().abs();
        if (dphase > 0.6 || (dmod > 1.0 && next.norm().max(cur.norm()) > eps)) && h > 1e-12 * scale {
            h *= 0.5;
            continue;
        }
        if !next.norm().is_finite() || next.norm() > 1e12 {
            return Err(Error::NonConvergence(format!("integrand grows along the contour at s={next_s}")));
        }
        turned += dphase;
        s = next_s;
        cur = next;
        peak = peak.max(cur.norm());
        if turned > 3.0 * PI {
            cuts.push(s);
            turned = 0.0;
            if cuts.len() > MAX_PIECES {
                return Err(Error::NonConvergence("too many oscillations along the contour".into()));
            }
        }
        if b.is_none() {
            quiet = if cur.norm() < eps { quiet + 1 } else { 0 };
            // Decay past the peak is monotone on these contours.
            if quiet >= 8 && peak > cur.norm() {
                break;
            }
        }
        if dphase < 0.15 && dmod < 0.25 {
            h *= 1.5;
        }
    }
    if *cuts.last().unwrap() < s {
        cuts.push(s);
    }
    let pieces = cuts.len() - 1;
    let ptol = tol / pieces.max(1) as f64;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += quad::integrate(|u| g(u).re, w[0], w[1], ptol, 4000)?.value;
    }
    Ok(total)
}
