use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::RngStream;
use crate::error::{ensure, Error, Result};

/// Draws per parallel chunk; each chunk owns stream `base + index`.
pub const CHUNK: usize = 4096;

/// Draws `n` values in parallel with a fixed chunk-to-stream assignment, so
/// the output does not depend on the number of worker threads.
pub fn sample_many<F>(seed: u64, stream_base: u64, n: usize, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, stream_base + c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn check_nu(nu: f64) -> Result<()> {
    ensure(nu > 0.0 && nu <= 1.0, || format!("nu must lie in (0, 1], got {nu}"))
}

fn check_t(t: f64) -> Result<()> {
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))
}

/// `H^ν(t)` with `E e^{−λH} = e^{−tλ^ν}`, by Kanter's representation.
pub fn sample_stable_subordinator(nu: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    if nu == 1.0 {
        return Ok(t);
    }
    let u = PI * rng.uniform_open();
    let e = rng.exponential();
    let a = ((nu * u).sin() / u.sin()).powf(1.0 / (1.0 - nu)) * ((1.0 - nu) * u).sin() / (nu * u).sin();
    Ok(t.powf(1.0 / nu) * (a / e).powf((1.0 - nu) / nu))
}

/// `L^ν(t) = inf{s : H^ν(s) ≥ t}`, via `L^ν(t) = (t / H^ν(1))^ν` in law.
pub fn sample_inverse_subordinator(nu: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    if nu == 1.0 {
        return Ok(t);
    }
    let h = sample_stable_subordinator(nu, 1.0, rng)?;
    Ok((t / h).powf(nu))
}

/// Standard Brownian motion at time `t`, wrapped onto `[0, 2π)`.
pub fn sample_wrapped_bm(t: f64, rng: &mut RngStream) -> Result<f64> {
    check_t(t)?;
    Ok(wrap(t.sqrt() * rng.normal()))
}

pub(crate) fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Exit angle of planar Brownian motion started at `(r, 0)` from the unit disk.
///
/// Euler steps of length `max(step, (d/6)²)`, where `d` is the distance to
/// the circle. Between steps a Brownian-bridge test catches excursions that
/// leave and re-enter; a crossing is placed on the chord by linear
/// interpolation and projected onto the circle.
pub fn simulate_planar_hit(r: f64, rng: &mut RngStream, step: f64) -> Result<f64> {
    ensure(r > 0.0 && r < 1.0, || format!("start radius must lie in (0, 1), got {r}"))?;
    ensure(step > 0.0 && step.is_finite(), || format!("step must be positive, got {step}"))?;
    let max_steps = ((200.0 / step) as u64).min(2_000_000_000);
    let (mut x, mut y) = (r, 0.0);
    for _ in 0..max_steps {
        let d1 = 1.0 - (x * x + y * y).sqrt();
        let dt = step.max((d1 / 6.0).powi(2));
        let s = dt.sqrt();
        let (nx, ny) = (x + s * rng.normal(), y + s * rng.normal());
        let rn = (nx * nx + ny * ny).sqrt();
        if rn >= 1.0 {
            // Solve |p + λ(q − p)| = 1 for λ in (0, 1].
            let (dx, dy) = (nx - x, ny - y);
            let a = dx * dx + dy * dy;
            let b = 2.0 * (x * dx + y * dy);
            let c = x * x + y * y - 1.0;
            let lam = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
            return Ok(wrap((y + lam * dy).atan2(x + lam * dx)));
        }
        let d2 = 1.0 - rn;
        if rng.uniform() < (-2.0 * d1 * d2 / dt).exp() {
            return Ok(wrap((0.5 * (y + ny)).atan2(0.5 * (x + nx))));
        }
        x = nx;
        y = ny;
    }
    Err(Error::NonConvergence(format!("planar walk did not exit within {max_steps} steps")))
}

/// Survival weight of a line Brownian path in `(−θ, θ)` up to time `t`.
///
/// The path is sampled on `steps` points; between them the probability of
/// touching either barrier is removed by the Brownian-bridge formula. The
/// mean weight estimates `P(−θ < min B < max B < θ)`.
pub fn double_barrier_weight(theta: f64, t: f64, steps: usize, rng: &mut RngStream) -> Result<f64> {
    ensure(theta > 0.0, || format!("barrier must be positive, got {theta}"))?;
    check_t(t)?;
    ensure(steps >= 1, || "need at least one step".into())?;
    let dt = t / steps as f64;
    let s = dt.sqrt();
    let mut x = 0.0;
    let mut w = 1.0;
    for _ in 0..steps {
        let nx = x + s * rng.normal();
        if nx.abs() >= theta {
            return Ok(0.0);
        }
        let up = (-2.0 * (theta - x) * (theta - nx) / dt).exp();
        let down = (-2.0 * (theta + x) * (theta + nx) / dt).exp();
        w *= (1.0 - up - down).max(0.0);
        x = nx;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ks::{ks_statistic, ks_two_sample};
    use crate::specfun::{gamma, mittag_leffler, Tolerance};

    #[test]
    fn degenerate_cases() {
        let mut r = RngStream::new(1, 0);
        assert_eq!(sample_stable_subordinator(1.0, 2.0, &mut r).unwrap(), 2.0);
        assert_eq!(sample_inverse_subordinator(1.0, 0.7, &mut r).unwrap(), 0.7);
        assert!(sample_stable_subordinator(0.0, 1.0, &mut r).is_err());
        assert!(sample_wrapped_bm(-1.0, &mut r).is_err());
    }

    #[test]
    fn half_stable_is_levy() {
        let n = 100_000;
        let xs = sample_many(11, 0, n, |r| sample_stable_subordinator(0.5, 1.0, r)).unwrap();
        let ks = ks_statistic(&xs, |x| libm::erfc(1.0 / (2.0 * x.sqrt()))).unwrap();
        assert!(ks < 0.01, "{ks}");
        let mut s = xs.clone();
        s.sort_by(f64::total_cmp);
        let med = s[n / 2];
        assert!((med - 1.0990).abs() < 0.03, "{med}");
    }

    #[test]
    fn stable_scaling() {
        let (nu, t) = (0.6, 2.5);
        let a = sample_many(12, 0, 50_000, |r| sample_stable_subordinator(nu, t, r)).unwrap();
        let b = sample_many(13, 0, 50_000, |r| {
            Ok(t.powf(1.0 / nu) * sample_stable_subordinator(nu, 1.0, r)?)
        })
        .unwrap();
        assert!(ks_two_sample(&a, &b).unwrap() < 0.015);
    }

    #[test]
    fn inverse_subordinator_moments() {
        let n = 1_000_000;
        let xs = sample_many(14, 0, n, |r| sample_inverse_subordinator(0.5, 1.0, r)).unwrap();
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let expect = 1.0 / gamma(1.5);
        assert!((mean - expect).abs() < 3.0 * (var / nf).sqrt(), "{mean} vs {expect}");
        let lt = xs.iter().map(|x| (-x).exp()).sum::<f64>() / nf;
        let ml = mittag_leffler(0.5, -1.0, Tolerance::default()).unwrap();
        assert!((lt - ml).abs() < 0.005);
    }

    #[test]
    fn wrapped_bm_resultant() {
        let n = 200_000;
        let t = 1.0;
        let xs = sample_many(15, 0, n, |r| sample_wrapped_bm(t, r)).unwrap();
        let c = xs.iter().map(|x| x.cos()).sum::<f64>() / n as f64;
        assert!((c - (-t / 2.0).exp()).abs() < 5.0 / (n as f64).sqrt());
        assert!(xs.iter().all(|&x| (0.0..TAU).contains(&x)));
        let xs = sample_many(16, 0, 100_000, |r| sample_wrapped_bm(50.0, r)).unwrap();
        assert!(ks_statistic(&xs, |x| x / TAU).unwrap() < 0.01);
    }

    #[test]
    fn planar_hit_from_center_is_uniform() {
        let xs = sample_many(17, 0, 20_000, |r| simulate_planar_hit(1e-3, r, 1e-4)).unwrap();
        assert!(ks_statistic(&xs, |x| x / TAU).unwrap() < 0.015);
        let s = xs.iter().map(|x| x.sin()).sum::<f64>() / xs.len() as f64;
        assert!(s.abs() < 5.0 / (xs.len() as f64 * 2.0).sqrt());
        assert!(simulate_planar_hit(1.0, &mut RngStream::new(0, 0), 1e-3).is_err());
    }

    #[test]
    fn parallel_sampling_is_deterministic() {
        let a = sample_many(5, 9, 10_000, |r| Ok(r.uniform())).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_many(5, 9, 10_000, |r| Ok(r.uniform())).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn double_barrier_wide_limit() {
        let mut r = RngStream::new(3, 0);
        let w: f64 = (0..1000).map(|_| double_barrier_weight(20.0, 1.0, 50, &mut r).unwrap()).sum();
        assert!((w / 1000.0 - 1.0).abs() < 1e-12);
    }
}
