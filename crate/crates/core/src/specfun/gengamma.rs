use crate::error::{ensure, Result};

/// Parameters of the generalized gamma variable `G^γ(1/t)`, whose density is
/// `γ x^{γ−1} t e^{−x^γ t}` on `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGammaParams {
    pub gamma: f64,
    pub scale_t: f64,
}

impl GenGammaParams {
    pub fn new(gamma: f64, scale_t: f64) -> Result<Self> {
        ensure(gamma > 0.0 && gamma.is_finite(), || format!("gamma must be positive, got {gamma}"))?;
        ensure(scale_t > 0.0 && scale_t.is_finite(), || {
            format!("scale_t must be positive, got {scale_t}")
        })?;
        Ok(Self { gamma, scale_t })
    }

    /// Point beyond which the tail mass is below `eps`.
    pub(crate) fn quantile_upper(&self, eps: f64) -> f64 {
        ((-eps.ln()) / self.scale_t).powf(1.0 / self.gamma)
    }
}

pub fn gen_gamma_density(p: GenGammaParams, x: f64) -> Result<f64> {
    ensure(x >= 0.0, || format!("density argument must be nonnegative, got {x}"))?;
    let GenGammaParams { gamma: g, scale_t: t } = p;
    if x == 0.0 {
        return Ok(if g < 1.0 {
            f64::INFINITY
        } else if g == 1.0 {
            t
        } else {
            0.0
        });
    }
    Ok(g * x.powf(g - 1.0) * t * (-x.powf(g) * t).exp())
}

/// `P(G^γ(1/t) > k) = e^{−k^γ t}`.
pub fn gen_gamma_tail(p: GenGammaParams, k: f64) -> Result<f64> {
    ensure(k >= 0.0, || format!("tail threshold must be nonnegative, got {k}"))?;
    Ok((-k.powf(p.gamma) * p.scale_t).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn tail_examples() {
        assert_eq!(gen_gamma_tail(GenGammaParams::new(4.0, 1.0).unwrap(), 0.0).unwrap(), 1.0);
        let v = gen_gamma_tail(GenGammaParams::new(2.0, 1.0).unwrap(), 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn density_has_unit_mass() {
        let p = GenGammaParams::new(4.0, 0.7).unwrap();
        let e = quad::integrate_to_infinity(|x| gen_gamma_density(p, x).unwrap(), 0.0, 1e-12).unwrap();
        assert!((e.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn tail_matches_integrated_density() {
        for &g in &[1.5, 2.0, 3.0, 6.0] {
            for &t in &[0.3, 1.0, 2.5] {
                let p = GenGammaParams::new(g, t).unwrap();
                for &k in &[0.2, 0.8, 1.3] {
                    let head = quad::integrate(|x| gen_gamma_density(p, x).unwrap(), 0.0, k, 1e-13, 500)
                        .unwrap()
                        .value;
                    let tail = gen_gamma_tail(p, k).unwrap();
                    assert!((tail - (1.0 - head)).abs() < 1e-9, "g={g} t={t} k={k}");
                }
            }
        }
    }

    #[test]
    fn rejects_negative_arguments() {
        let p = GenGammaParams::new(2.0, 1.0).unwrap();
        assert!(gen_gamma_density(p, -1.0).is_err());
        assert!(gen_gamma_tail(p, -0.1).is_err());
        assert!(GenGammaParams::new(0.0, 1.0).is_err());
    }
}
