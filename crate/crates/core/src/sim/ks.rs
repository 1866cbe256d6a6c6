use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::harmonic::{GridDensity, GridKind};

/// One-sample Kolmogorov–Smirnov distance between the empirical law and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Histogram of angles in `[0, 2π)`, normalized to density units.
pub fn histogram(samples: &[f64], bins: usize) -> Result<GridDensity> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    ensure(bins >= 2, || format!("need at least 2 bins, got {bins}"))?;
    let width = TAU / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in samples {
        let idx = ((s.rem_euclid(TAU) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = samples.len() as f64;
    Ok(GridDensity {
        thetas: (0..bins).map(|i| i as f64 * width).collect(),
        values: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        kind: GridKind::Density,
        law_meta: format!("histogram of {} samples", samples.len()),
    })
}

/// Outcome of comparing a Monte Carlo sample with an analytic CDF.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub n_samples: usize,
    pub ks_statistic: f64,
    pub ks_threshold: f64,
    pub passed: bool,
    pub histogram: GridDensity,
}

impl McReport {
    pub fn new(samples: &[f64], cdf: impl Fn(f64) -> f64, ks_threshold: f64, bins: usize) -> Result<Self> {
        let ks = ks_statistic(samples, cdf)?;
        Ok(Self {
            n_samples: samples.len(),
            ks_statistic: ks,
            ks_threshold,
            passed: ks < ks_threshold,
            histogram: histogram(samples, bins)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::RngStream;

    #[test]
    fn calibrated_under_null() {
        // Inverse-CDF draws from F(x) = x²/(4π²) on [0, 2π).
        let n = 100_000;
        let thr = 1.63 / (n as f64).sqrt();
        let mut exceed = 0;
        for seed in 0..100 {
            let mut r = RngStream::new(seed, 0);
            let xs: Vec<f64> = (0..n).map(|_| TAU * r.uniform().sqrt()).collect();
            if ks_statistic(&xs, |x| (x / TAU).powi(2)).unwrap() >= thr {
                exceed += 1;
            }
        }
        assert!(exceed <= 1, "{exceed} of 100 exceeded");
    }

    #[test]
    fn degenerate_sample() {
        let xs = vec![1.0; 500];
        let d = ks_statistic(&xs, |x| x / TAU).unwrap();
        assert!(d > 0.8);
        let xs = vec![0.0; 500];
        assert!((ks_statistic(&xs, |x| x / TAU).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ks_statistic(&[], |x| x), Err(Error::EmptySample));
    }

    #[test]
    fn uniform_histogram() {
        let mut r = RngStream::new(3, 0);
        let n = 200_000;
        let bins = 50;
        let xs: Vec<f64> = (0..n).map(|_| TAU * r.uniform()).collect();
        let h = histogram(&xs, bins).unwrap();
        let width = TAU / bins as f64;
        let expect = n as f64 / bins as f64;
        let sigma = expect.sqrt() / (n as f64 * width);
        for &v in &h.values {
            assert!((v - 1.0 / TAU).abs() < 5.0 * sigma);
        }
        let rep = McReport::new(&xs, |x| x / TAU, 0.01, bins).unwrap();
        assert!(rep.passed && rep.ks_statistic >= 0.0);
    }

    #[test]
    fn two_sample_identical() {
        let a = vec![0.1, 0.5, 0.9];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
    }
}
