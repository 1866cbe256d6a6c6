//! Time-, space- and space-time-fractional circular laws.

use std::f64::consts::{PI, TAU};

use log::warn;

use crate::error::{ensure, Result};
use crate::harmonic::HarmonicLaw;
use crate::pseudo::v_even;
use crate::quad;
use crate::specfun::{gamma, mittag_leffler, Tolerance};

/// Caputo order `ν` in time and stability index `β` in space, both in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    pub nu: f64,
    pub beta: f64,
}

impl FracParams {
    pub fn new(nu: f64, beta: f64) -> Result<Self> {
        check_unit("nu", nu)?;
        check_unit("beta", beta)?;
        Ok(Self { nu, beta })
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    ensure(v > 0.0 && v <= 1.0, || format!("{name} must lie in (0, 1], got {v}"))
}

fn check_t(t: f64) -> Result<()> {
    ensure(t > 0.0 && t.is_finite(), || format!("t must be positive, got {t}"))
}

/// Coefficient profile `a_k = φ(c k^s)/π` with `φ` decreasing.
enum Profile {
    /// `φ(x) = e^{−x}`.
    Exp,
    /// `φ(x) = E_ν(−x)`, bounded by `Γ(1+ν)/x`.
    MittagLeffler(f64),
}

/// Builds the cosine law for a profile, stopping once the retained
/// coefficient drops below `tol` (and, for exponential profiles, once the
/// summed tail is below `tol`), or at the term cap with a warning.
fn cosine_law(profile: Profile, c: f64, s: f64, tol: Tolerance, meta: String) -> Result<HarmonicLaw> {
    let coef = |k: usize| -> Result<f64> {
        let x = c * (k as f64).powf(s);
        Ok(match profile {
            Profile::Exp => (-x).exp(),
            Profile::MittagLeffler(nu) => mittag_leffler(nu, -x, tol)?,
        } / PI)
    };
    let exp_tail = |k: usize| -> Result<f64> {
        let f = |x: f64| (-c * x.powf(s)).exp();
        Ok(quad::integrate_to_infinity(f, k as f64, 1e-3 * tol.abs_tol)?.value / PI)
    };
    let mut coeffs = Vec::new();
    let mut capped = false;
    loop {
        let k = coeffs.len() + 1;
        if k > tol.max_terms {
            capped = true;
            break;
        }
        let a = coef(k)?;
        if a < tol.abs_tol {
            match profile {
                Profile::Exp if exp_tail(k - 1)? > tol.abs_tol => {}
                _ => break,
            }
        }
        coeffs.push(a);
    }
    let k = coeffs.len();
    // Sums over k > K are bounded by integrals from K of the decreasing envelope.
    let (tail, cdf_tail) = match profile {
        Profile::Exp => {
            let d = exp_tail(k)?;
            (d, d / ((k + 1) as f64))
        }
        Profile::MittagLeffler(nu) => {
            let g = gamma(1.0 + nu) / (PI * c);
            let kf = k.max(1) as f64;
            let dens = if s > 1.0 { g / ((s - 1.0) * kf.powf(s - 1.0)) } else { f64::INFINITY };
            (dens, g / (s * kf.powf(s)))
        }
    };
    if capped {
        warn!("{meta}: truncated at the cap of {} terms; density tail ≤ {tail:e}, cdf tail ≤ {cdf_tail:e}", tol.max_terms);
    }
    Ok(HarmonicLaw::cosine(coeffs, tail, cdf_tail, meta))
}

/// Time-fractional even-order law, `a_k = E_ν(−k^{2n} t^ν)/π`.
pub fn v_time_frac(n: u32, nu: f64, t: f64, tol: Tolerance) -> Result<HarmonicLaw> {
    ensure(n >= 1, || format!("n must be at least 1, got {n}"))?;
    check_unit("nu", nu)?;
    check_t(t)?;
    if nu == 1.0 {
        let mut law = v_even(n, t, tol)?;
        law.meta = format!("time-fractional n={n} nu=1 t={t}");
        return Ok(law);
    }
    let meta = format!("time-fractional n={n} nu={nu} t={t}");
    cosine_law(Profile::MittagLeffler(nu), t.powf(nu), 2.0 * n as f64, tol, meta)
}

/// Space-fractional circular BM law, `a_k = e^{−(k²/2)^β t}/π`.
pub fn space_frac_law(beta: f64, t: f64, tol: Tolerance) -> Result<HarmonicLaw> {
    check_unit("beta", beta)?;
    check_t(t)?;
    let meta = format!("space-fractional beta={beta} t={t}");
    cosine_law(Profile::Exp, t / 2f64.powf(beta), 2.0 * beta, tol, meta)
}

pub fn p_space_frac(beta: f64, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    Ok(space_frac_law(beta, t, tol)?.eval(theta))
}

/// Wrapped symmetric stable law, `a_k = e^{−k^{2β} t}/π`.
pub fn wrapped_stable_law(beta: f64, t: f64, tol: Tolerance) -> Result<HarmonicLaw> {
    check_unit("beta", beta)?;
    check_t(t)?;
    let meta = format!("wrapped stable beta={beta} t={t}");
    cosine_law(Profile::Exp, t, 2.0 * beta, tol, meta)
}

pub fn p_wrapped_stable(beta: f64, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    Ok(wrapped_stable_law(beta, t, tol)?.eval(theta))
}

/// Space-time-fractional law, `a_k = E_ν(−(k²/2)^β t^ν)/π`.
pub fn space_time_frac_law(nu: f64, beta: f64, t: f64, tol: Tolerance) -> Result<HarmonicLaw> {
    check_unit("nu", nu)?;
    check_unit("beta", beta)?;
    check_t(t)?;
    let meta = format!("space-time-fractional nu={nu} beta={beta} t={t}");
    let c = t.powf(nu) / 2f64.powf(beta);
    if nu == 1.0 {
        return cosine_law(Profile::Exp, c, 2.0 * beta, tol, meta);
    }
    cosine_law(Profile::MittagLeffler(nu), c, 2.0 * beta, tol, meta)
}

pub fn p_space_time_frac(nu: f64, beta: f64, theta: f64, t: f64, tol: Tolerance) -> Result<f64> {
    Ok(space_time_frac_law(nu, beta, t, tol)?.eval(theta))
}

/// Which operator [`frac_laplacian_apply`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianSign {
    /// `(−½∂²_θ)^β`, eigenvalues `(k²/2)^β ≥ 0`.
    Positive,
    /// `−(−½∂²_θ)^β`, the generator of the space-fractional semigroup.
    Generator,
}

/// Applies the spectral fractional Laplacian to a law's coefficients.
pub fn frac_laplacian_apply(beta: f64, law: &HarmonicLaw, sign: LaplacianSign) -> Result<HarmonicLaw> {
    check_unit("beta", beta)?;
    let s = match sign {
        LaplacianSign::Positive => 1.0,
        LaplacianSign::Generator => -1.0,
    };
    let meta = format!("fractional Laplacian beta={beta} of [{}]", law.meta);
    Ok(law.map_coeffs(|k| s * (0.5 * (k * k) as f64).powf(beta), 0.0, meta))
}

/// Closed form of the `β = 1/2` space-fractional law,
/// `(1/2π)(1 − r²)/(1 + r² − 2r cos θ)` with `r = e^{−t/√2}`.
pub fn space_frac_half_closed_form(theta: f64, t: f64) -> f64 {
    let r = (-t / 2f64.sqrt()).exp();
    (1.0 - r * r) / (TAU * (1.0 + r * r - 2.0 * r * theta.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bm::circ_bm_density;
    use crate::pseudo::v_even;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn time_fractional_reduces_to_even_law() {
        for n in 1..=3 {
            let a = v_time_frac(n, 1.0, 0.7, tol()).unwrap();
            let b = v_even(n, 0.7, tol()).unwrap();
            assert_eq!(a.cos_coeffs, b.cos_coeffs);
        }
        // Mittag-Leffler of order one is the exponential bit for bit.
        for k in 1..6 {
            let x = -((k * k) as f64) * 0.7;
            assert_eq!(mittag_leffler(1.0, x, tol()).unwrap(), x.exp());
        }
    }

    #[test]
    fn time_fractional_law() {
        let law = v_time_frac(2, 0.6, 1.0, tol()).unwrap();
        assert!((law.cdf(TAU).unwrap() - 1.0).abs() < 1e-15);
        assert!(law.cos_coeffs.windows(2).all(|w| w[1] <= w[0]));
        assert!(law.cos_coeffs.last().unwrap() >= &1e-10);
        assert!(law.cdf_tail_bound < 1e-9);
        // Slower relaxation than the classical law.
        let e = v_even(2, 1.0, tol()).unwrap();
        assert!(law.cos_coeffs[0] > e.cos_coeffs[0]);
    }

    #[test]
    fn space_fractional_reductions() {
        for i in 0..64 {
            let th = TAU * i as f64 / 64.0;
            let fine = Tolerance::with_abs(1e-15);
            let a = p_space_frac(1.0, th, 1.0, fine).unwrap();
            assert!((a - circ_bm_density(th, 1.0, fine).unwrap()).abs() < 1e-12);
            let b = p_space_frac(0.5, th, 1.0, tol()).unwrap();
            assert!((b - space_frac_half_closed_form(th, 1.0)).abs() < 1e-10);
        }
        assert!((p_space_frac(1.0, 0.0, 1.0, tol()).unwrap() - 0.398_942_28).abs() < 1e-8);
        assert!((p_space_frac(0.5, 0.0, 1.0, tol()).unwrap() - 0.468_76).abs() < 5e-5);
        let law = space_frac_law(0.7, 0.4, tol()).unwrap();
        assert!(law.tail_bound <= 1e-10);
        assert!((law.cdf(TAU).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrapped_stable_equality_in_law() {
        for &beta in &[0.3, 0.5, 0.9] {
            for i in 0..64 {
                let th = TAU * i as f64 / 64.0;
                let a = p_wrapped_stable(beta, th, 0.8, tol()).unwrap();
                let b = p_space_frac(beta, th, 2f64.powf(beta) * 0.8, tol()).unwrap();
                assert!((a - b).abs() < 1e-10);
            }
        }
        let r = (-1f64).exp();
        let g = (1.0 + r) / (TAU * (1.0 - r));
        assert!((p_wrapped_stable(0.5, 0.0, 1.0, tol()).unwrap() - g).abs() < 1e-10);
        assert!((g - 0.344_403_882_417_088).abs() < 1e-14);
        let e = v_even(1, 0.9, tol()).unwrap();
        assert!((p_wrapped_stable(1.0, 2.0, 0.9, tol()).unwrap() - e.eval(2.0)).abs() < 1e-12);
    }

    #[test]
    fn laplacian() {
        let law = space_frac_law(0.5, 1.0, tol()).unwrap();
        let l = frac_laplacian_apply(0.5, &law, LaplacianSign::Positive).unwrap();
        assert_eq!(l.a0, 0.0);
        assert!((l.cos_coeffs[1] / law.cos_coeffs[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!(l.cos_coeffs.iter().all(|&c| c >= 0.0));
        let bm = space_frac_law(1.0, 1.0, tol()).unwrap();
        let g = frac_laplacian_apply(1.0, &bm, LaplacianSign::Generator).unwrap();
        for k in 1..=4 {
            let r = g.cos_coeffs[k - 1] / bm.cos_coeffs[k - 1];
            assert!((r + 0.5 * (k * k) as f64).abs() < 1e-13);
        }
        // d/dt of the coefficients is the generator applied to the law.
        let (beta, t, h) = (0.6, 0.9, 1e-5);
        let a = |t| space_frac_law(beta, t, tol()).unwrap().cos_coeffs;
        let (ap, am) = (a(t + h), a(t - h));
        let g = frac_laplacian_apply(beta, &space_frac_law(beta, t, tol()).unwrap(), LaplacianSign::Generator).unwrap();
        for k in 0..4 {
            assert!(((ap[k] - am[k]) / (2.0 * h) - g.cos_coeffs[k]).abs() < 1e-7);
        }
        assert!(frac_laplacian_apply(1.5, &bm, LaplacianSign::Positive).is_err());
    }

    #[test]
    fn space_time_reductions() {
        for i in 0..16 {
            let th = TAU * i as f64 / 16.0;
            let a = p_space_time_frac(1.0, 0.6, th, 1.2, tol()).unwrap();
            let b = p_space_frac(0.6, th, 1.2, tol()).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        // β = 1 is time-fractional circular BM: v_time_frac(1, ν, t 2^{−1/ν}).
        let nu = 0.7;
        let a = space_time_frac_law(nu, 1.0, 1.0, tol()).unwrap();
        let b = v_time_frac(1, nu, 2f64.powf(-1.0 / nu), tol()).unwrap();
        for k in 0..20 {
            assert!((a.cos_coeffs[k] - b.cos_coeffs[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn semigroup() {
        let (beta, t1, t2) = (0.4, 0.3, 0.5);
        let a = space_frac_law(beta, t1, tol()).unwrap();
        let b = space_frac_law(beta, t2, tol()).unwrap();
        let c = space_frac_law(beta, t1 + t2, tol()).unwrap();
        for k in 0..10 {
            assert!((PI * a.cos_coeffs[k] * b.cos_coeffs[k] - c.cos_coeffs[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FracParams::new(0.0, 0.5).is_err());
        assert!(FracParams::new(0.5, 1.1).is_err());
        assert!(v_time_frac(0, 0.5, 1.0, tol()).is_err());
        assert!(p_space_frac(0.5, 0.0, 0.0, tol()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn laws_have_unit_mass_and_even_symmetry(beta in 0.3f64..1.0, t in 0.2f64..3.0, th in 0.0f64..3.0) {
            let law = space_frac_law(beta, t, tol()).unwrap();
            proptest::prop_assert!((law.cdf(TAU).unwrap() - 1.0).abs() < 1e-14);
            proptest::prop_assert!((law.eval(th) - law.eval(TAU - th)).abs() < 1e-12);
        }
    }
}
