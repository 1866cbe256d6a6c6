//! Truncated Fourier representation shared by every circular law.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{ensure, Result};

/// `f(θ) = a0 + Σ_{k=1}^K (a_k cos kθ + b_k sin kθ)`.
///
/// `tail_bound` bounds the dropped remainder of the density pointwise;
/// `cdf_tail_bound` bounds the dropped remainder of the termwise integral.
/// For laws whose density is only a distribution (coefficients that do not
/// decay absolutely) `tail_bound` is infinite while the CDF bound stays finite.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicLaw {
    pub a0: f64,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
    pub tail_bound: f64,
    pub cdf_tail_bound: f64,
    pub meta: String,
}

impl HarmonicLaw {
    /// Uniform law `1/(2π)`.
    pub fn uniform() -> Self {
        Self {
            a0: 1.0 / TAU,
            cos_coeffs: Vec::new(),
            sin_coeffs: Vec::new(),
            tail_bound: 0.0,
            cdf_tail_bound: 0.0,
            meta: "uniform".into(),
        }
    }

    /// Even law with cosine coefficients only.
    pub fn cosine(cos_coeffs: Vec<f64>, tail_bound: f64, cdf_tail_bound: f64, meta: String) -> Self {
        let sin_coeffs = vec![0.0; cos_coeffs.len()];
        Self { a0: 1.0 / TAU, cos_coeffs, sin_coeffs, tail_bound, cdf_tail_bound, meta }
    }

    pub fn terms(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let th = theta.rem_euclid(TAU);
        let mut s = self.a0;
        for (i, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let (sn, cs) = ((i + 1) as f64 * th).sin_cos();
            s += a * cs + b * sn;
        }
        s
    }

    /// `∫₀^θ f`, for `θ ∈ [0, 2π]`.
    pub fn cdf(&self, theta: f64) -> Result<f64> {
        ensure((0.0..=TAU).contains(&theta), || format!("cdf angle must lie in [0, 2π], got {theta}"))?;
        if theta == TAU {
            return Ok(self.a0 * TAU);
        }
        let mut s = self.a0 * theta;
        for (i, (&a, &b)) in self.cos_coeffs.iter().zip(&self.sin_coeffs).enumerate() {
            let k = (i + 1) as f64;
            let (sn, cs) = (k * theta).sin_cos();
            s += (a * sn + b * (1.0 - cs)) / k;
        }
        Ok(s)
    }

    /// Termwise map of the coefficients; `a0` goes to `f(0)`.
    pub fn map_coeffs(&self, f: impl Fn(usize) -> f64, a0: f64, meta: String) -> Self {
        let m = |v: &[f64]| v.iter().enumerate().map(|(i, &c)| f(i + 1) * c).collect::<Vec<_>>();
        Self {
            a0,
            cos_coeffs: m(&self.cos_coeffs),
            sin_coeffs: m(&self.sin_coeffs),
            tail_bound: f64::INFINITY,
            cdf_tail_bound: f64::INFINITY,
            meta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Density,
    Cdf,
}

/// Values of a law on a uniform angular grid starting at 0.
///
/// Density grids cover `[0, 2π)`; CDF grids include the endpoint `2π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDensity {
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: GridKind,
    pub law_meta: String,
}

impl GridDensity {
    pub fn tabulate(
        points: usize,
        kind: GridKind,
        law_meta: String,
        mut f: impl FnMut(f64) -> Result<f64>,
    ) -> Result<Self> {
        ensure(points >= 2, || format!("grid needs at least 2 points, got {points}"))?;
        let step = match kind {
            GridKind::Density => TAU / points as f64,
            GridKind::Cdf => TAU / (points - 1) as f64,
        };
        let thetas: Vec<f64> = (0..points)
            .map(|i| if kind == GridKind::Cdf && i == points - 1 { TAU } else { i as f64 * step })
            .collect();
        let values = thetas.iter().map(|&th| f(th)).collect::<Result<Vec<_>>>()?;
        Ok(Self { thetas, values, kind, law_meta })
    }

    pub fn of_law(law: &HarmonicLaw, points: usize, kind: GridKind) -> Result<Self> {
        match kind {
            GridKind::Density => Self::tabulate(points, kind, law.meta.clone(), |th| Ok(law.eval(th))),
            GridKind::Cdf => Self::tabulate(points, kind, law.meta.clone(), |th| law.cdf(th)),
        }
    }
}

/// Fourier projections `a_k = (1/π)∫ f cos kθ`, `b_k = (1/π)∫ f sin kθ` for `k = 1..=K`.
///
/// Uses the periodic trapezoid rule on `64K` nodes, which is
/// spectrally accurate for smooth periodic integrands.
pub fn fourier_coeffs(density: impl Fn(f64) -> f64, k_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    ensure(k_max >= 1, || "K must be at least 1".into())?;
    let nodes = 64 * k_max;
    let h = TAU / nodes as f64;
    let samples: Vec<f64> = (0..nodes).map(|j| density(j as f64 * h)).collect();
    let mut a = Vec::with_capacity(k_max);
    let mut b = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (j, &v) in samples.iter().enumerate() {
            // Index arithmetic keeps kθ_j exact modulo the grid.
            let (sn, cs) = (((k * j) % nodes) as f64 * h).sin_cos();
            sa += v * cs;
            sb += v * sn;
        }
        a.push(sa * h / PI);
        b.push(sb * h / PI);
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_law() -> HarmonicLaw {
        HarmonicLaw {
            a0: 1.0 / TAU,
            cos_coeffs: vec![0.1, 0.02],
            sin_coeffs: vec![-0.05, 0.01],
            tail_bound: 0.0,
            cdf_tail_bound: 0.0,
            meta: "test".into(),
        }
    }

    #[test]
    fn evaluation_is_periodic() {
        let l = sample_law();
        for &th in &[0.0, 0.7, 3.0, 6.0] {
            assert!((l.eval(th) - l.eval(th + TAU)).abs() < 1e-14);
            assert!((l.eval(th) - l.eval(th - 3.0 * TAU)).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_endpoints_and_derivative() {
        let l = sample_law();
        assert_eq!(l.cdf(0.0).unwrap(), 0.0);
        assert!((l.cdf(TAU).unwrap() - 1.0).abs() < 1e-15);
        let h = 1e-5;
        for &th in &[0.3, 2.0, 5.0] {
            let d = (l.cdf(th + h).unwrap() - l.cdf(th - h).unwrap()) / (2.0 * h);
            assert!((d - l.eval(th)).abs() < 1e-9);
        }
        assert!(l.cdf(-0.1).is_err());
    }

    #[test]
    fn projection_recovers_coefficients() {
        let l = sample_law();
        let (a, b) = fourier_coeffs(|th| l.eval(th), 4).unwrap();
        for k in 0..4 {
            let ea = l.cos_coeffs.get(k).copied().unwrap_or(0.0);
            let eb = l.sin_coeffs.get(k).copied().unwrap_or(0.0);
            assert!((a[k] - ea).abs() < 1e-14 && (b[k] - eb).abs() < 1e-14);
        }
        let (a, b) = fourier_coeffs(|_| 1.0 / TAU, 6).unwrap();
        assert!(a.iter().chain(&b).all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn grids() {
        let l = sample_law();
        let d = GridDensity::of_law(&l, 8, GridKind::Density).unwrap();
        assert_eq!(d.thetas[0], 0.0);
        assert!(d.thetas[7] < TAU);
        let c = GridDensity::of_law(&l, 9, GridKind::Cdf).unwrap();
        assert_eq!(*c.thetas.last().unwrap(), TAU);
        assert!((c.values.last().unwrap() - 1.0).abs() < 1e-15);
        assert!(d.thetas.windows(2).all(|w| w[1] > w[0]));
        assert!(GridDensity::of_law(&l, 1, GridKind::Density).is_err());
    }
}
