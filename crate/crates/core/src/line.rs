//! Fundamental solutions of `∂_t u = c_n ∂_x^{order} u` on the real line.

use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::quad;
use crate::specfun::oscillatory::fourier_power;
use crate::specfun::{airy_ai, GenGammaParams, Tolerance};

/// Smallest time accepted by the line quadratures.
pub const T_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Order `2n` or `2n + 1` of the equation with its sign constant.
///
/// For odd orders `a = cos(π/(2(2n+1)))` and `b = sin(π/(2(2n+1)))`; even
/// orders carry `a = 1`, `b = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParams {
    pub order: u32,
    pub n: u32,
    pub parity: Parity,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

impl OrderParams {
    pub fn new(order: u32) -> Result<Self> {
        ensure(order >= 2, || format!("order must be at least 2, got {order}"))?;
        let n = order / 2;
        let sign = |e: u32| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
        if order.is_multiple_of(2) {
            Ok(Self { order, n, parity: Parity::Even, c: sign(n + 1), a: 1.0, b: 0.0 })
        } else {
            let phi = PI / (2.0 * order as f64);
            Ok(Self { order, n, parity: Parity::Odd, c: sign(n), a: phi.cos(), b: phi.sin() })
        }
    }

    pub fn even(n: u32) -> Result<Self> {
        ensure(n >= 1, || "n must be at least 1".into())?;
        Self::new(2 * n)
    }

    pub fn odd(n: u32) -> Result<Self> {
        ensure(n >= 1, || "n must be at least 1".into())?;
        Self::new(2 * n + 1)
    }

    fn require(&self, parity: Parity) -> Result<()> {
        ensure(self.parity == parity, || format!("order {} has the wrong parity", self.order))
    }
}

fn check_time(t: f64) -> Result<()> {
    ensure(t.is_finite() && t > 0.0, || format!("t must be positive, got {t}"))?;
    if t < T_FLOOR {
        return Err(Error::NonConvergence(format!("t = {t} is below the floor {T_FLOOR}")));
    }
    Ok(())
}

/// Integrates `f` over `[0, end]` in pieces no longer than `wavelength`.
fn integrate_waves<F: FnMut(f64) -> f64>(f: F, end: f64, wavelength: f64, tol: f64) -> Result<f64> {
    let pieces = ((end / wavelength).ceil() as usize).clamp(1, 20_000);
    Ok(quad::integrate_split(f, 0.0, end, pieces, tol)?.value)
}

/// `(1/π) ∫₀^∞ cos(ξx) e^{−ξ^{2n} t} dξ`.
pub fn u_even(ord: OrderParams, x: f64, t: f64, tol: Tolerance) -> Result<f64> {
    ord.require(Parity::Even)?;
    check_time(t)?;
    ensure(x.is_finite(), || format!("x must be finite, got {x}"))?;
    let p = ord.order as f64;
    // ∫_Ξ^∞ e^{−ξ^p t} dξ ≤ e^{−Ξ^p t} / (p t Ξ^{p−1})
    let target = 0.01 * tol.abs_tol * PI;
    let mut cut = ((1.0 / target).ln().max(1.0) / t).powf(1.0 / p);
    while (-cut.powf(p) * t).exp() / (p * t * cut.powf(p - 1.0)) > target {
        cut *= 1.1;
    }
    let wave = if x == 0.0 { cut } else { 2.0 * PI / x.abs() };
    let v = integrate_waves(|xi| (xi * x).cos() * (-xi.powf(p) * t).exp(), cut, wave, 0.5 * tol.abs_tol * PI)?;
    Ok(v / PI)
}

/// `(1/(πx)) E[sin(x G)]` with `G` generalized gamma of shape `2n` and rate `t`.
pub fn u_even_prob_rep(ord: OrderParams, x: f64, t: f64, tol: Tolerance) -> Result<f64> {
    ord.require(Parity::Even)?;
    check_time(t)?;
    ensure(x != 0.0 && x.is_finite(), || "x must be finite and nonzero; use u_even at 0".into())?;
    let g = GenGammaParams::new(ord.order as f64, t)?;
    let target = 0.01 * tol.abs_tol * PI * x.abs();
    let end = g.quantile_upper(target);
    let wave = 2.0 * PI / x.abs();
    let gamma = ord.order as f64;
    let f = |s: f64| (x * s).sin() * gamma * s.powf(gamma - 1.0) * t * (-s.powf(gamma) * t).exp();
    let v = integrate_waves(f, end, wave, 0.5 * tol.abs_tol * PI * x.abs())?;
    Ok(v / (PI * x))
}

/// Third-order solution `(3t)^{−1/3} Ai(x (3t)^{−1/3})`.
pub fn u3(x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let c = (3.0 * t).cbrt();
    Ok(airy_ai(x / c, Tolerance::with_abs(1e-13))? / c)
}

/// `(1/π) ∫₀^∞ cos(ξx + ξ^{2n+1} t) dξ` by steepest-descent contour.
pub fn u_odd(ord: OrderParams, x: f64, t: f64, tol: Tolerance) -> Result<f64> {
    ord.require(Parity::Odd)?;
    check_time(t)?;
    fourier_power(x, t, ord.order, tol.abs_tol)
}

/// `(1/(πx)) E[e^{−b x G} sin(a x G)]` with `G` generalized gamma of shape `2n+1`.
///
/// For `x < 0` the weight `e^{b|x|G}` grows; once its peak would swamp the
/// requested accuracy in double precision the call fails with `Overflow`.
pub fn u_odd_prob_rep(ord: OrderParams, x: f64, t: f64, tol: Tolerance) -> Result<f64> {
    ord.require(Parity::Odd)?;
    check_time(t)?;
    ensure(x != 0.0 && x.is_finite(), || "x must be finite and nonzero".into())?;
    let p = ord.order as f64;
    let (a, b) = (ord.a, ord.b);
    let expo = |s: f64| -b * x * s - t * s.powf(p);
    let peak = if x < 0.0 {
        let s = (b * -x / (p * t)).powf(1.0 / (p - 1.0));
        expo(s)
    } else {
        0.0
    };
    if peak > (tol.abs_tol / 1e-15).ln() {
        return Err(Error::Overflow(format!(
            "weight e^(-b x G) peaks at e^{peak:.1}; cancellation exceeds tolerance at x = {x}"
        )));
    }
    let target = 0.01 * tol.abs_tol * PI * x.abs();
    let mut end = (1.0 / t).powf(1.0 / p).max(1.0);
    while expo(end) + (p * t * end.powf(p - 1.0)).ln() > target.ln() || end.powf(p) * t < 1.0 {
        end *= 1.2;
    }
    let wave = 2.0 * PI / (a * x.abs());
    let f = |s: f64| (a * x * s).sin() * p * s.powf(p - 1.0) * t * expo(s).exp();
    let v = integrate_waves(f, end, wave, 0.5 * tol.abs_tol * PI * x.abs())?;
    Ok(v / (PI * x))
}

/// Skewed Cauchy density `t a / (π[(x + t b)² + t² a²])`.
pub fn cauchy_skewed_density(ord: OrderParams, x: f64, t: f64) -> Result<f64> {
    ord.require(Parity::Odd)?;
    ensure(t.is_finite() && t > 0.0, || format!("t must be positive, got {t}"))?;
    let (a, b) = (ord.a, ord.b);
    let d = x + t * b;
    Ok(t * a / (PI * (d * d + t * t * a * a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::with_abs(1e-12)
    }
    fn even(n: u32) -> OrderParams {
        OrderParams::even(n).unwrap()
    }
    fn odd(n: u32) -> OrderParams {
        OrderParams::odd(n).unwrap()
    }

    #[test]
    fn order_constants() {
        let o = odd(1);
        assert!((o.a - 3f64.sqrt() / 2.0).abs() < 1e-15 && (o.b - 0.5).abs() < 1e-15);
        assert_eq!(o.c, -1.0);
        assert_eq!(even(1).c, 1.0);
        assert_eq!(even(2).c, -1.0);
        for n in 1..20 {
            let o = odd(n);
            assert!((o.a * o.a + o.b * o.b - 1.0).abs() < 1e-15);
        }
        assert!(OrderParams::new(1).is_err());
    }

    #[test]
    fn gaussian_case() {
        for &(x, t) in &[(0.0, 1.0), (0.7, 0.3), (2.5, 2.0), (-4.0, 0.5)] {
            let v = u_even(even(1), x, t, tol()).unwrap();
            let g = (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
            assert!((v - g).abs() < 1e-12, "x={x} t={t}");
        }
        assert!((u_even(even(1), 0.0, 1.0, tol()).unwrap() - 0.282_094_791_773_878_1).abs() < 1e-12);
    }

    #[test]
    fn fourth_order_values() {
        // Γ(5/4)/π via ∫₀^∞ e^{−ξ⁴} dξ by Simpson.
        let oracle = quad::simpson(|s| (-s.powi(4)).exp(), 0.0, 8.0, 200_000) / PI;
        assert!((u_even(even(2), 0.0, 1.0, tol()).unwrap() - oracle).abs() < 1e-10);
        assert!((oracle - 0.288_516_87).abs() < 1e-8);
        assert!((u_even(even(2), 3.0, 1.0, tol()).unwrap() - 0.031_877_798_487_844_3).abs() < 1e-11);
        assert!((u_even(even(2), 4.0, 1.0, tol()).unwrap() + 0.022_587_198_054_107_8).abs() < 1e-11);
    }

    #[test]
    fn probabilistic_route_matches() {
        for &n in &[1, 2, 3] {
            for &x in &[-2.0, 0.3, 0.5, 1.0, 3.5] {
                for &t in &[0.5, 1.0, 2.0] {
                    let a = u_even(even(n), x, t, tol()).unwrap();
                    let b = u_even_prob_rep(even(n), x, t, tol()).unwrap();
                    assert!((a - b).abs() < 1e-7, "n={n} x={x} t={t}: {a} vs {b}");
                }
            }
        }
        let a = u_even_prob_rep(even(2), 1.7, 0.8, tol()).unwrap();
        let b = u_even_prob_rep(even(2), -1.7, 0.8, tol()).unwrap();
        assert_eq!(a, b);
        assert!(u_even_prob_rep(even(1), 0.0, 1.0, tol()).is_err());
    }

    #[test]
    fn unit_mass() {
        for &n in &[1, 2, 3] {
            for &t in &[0.5, 1.0, 2.0] {
                let m = 2.0 * quad::integrate(|x| u_even(even(n), x, t, tol()).unwrap(), 0.0, 80.0, 1e-10, 4000)
                    .unwrap()
                    .value;
                assert!((m - 1.0).abs() < 1e-7, "n={n} t={t}: {m}");
            }
        }
    }

    #[test]
    fn heat_equation_residual() {
        let (x, t, h) = (0.3, 1.0, 1e-3);
        let u = |x, t| u_even(even(1), x, t, tol()).unwrap();
        let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        let uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
        assert!((ut - uxx).abs() < 1e-5);
    }

    #[test]
    fn airy_solution() {
        assert!((u3(0.0, 1.0 / 3.0).unwrap() - 0.355_028_053_887_817_2).abs() < 1e-12);
        assert!(u3(5.0, 1.0).unwrap() > 0.0);
        let neg: Vec<f64> = (0..40).map(|i| u3(-5.0 - 0.25 * i as f64, 1.0).unwrap()).collect();
        assert!(neg.iter().any(|&v| v < 0.0) && neg.iter().any(|&v| v > 0.0));
        for &x in &[-6.0, -1.0, 0.5, 3.0] {
            let a = u3(x, 0.7).unwrap();
            let b = u_odd(odd(1), x, 0.7, tol()).unwrap();
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn airy_solution_has_unit_mass() {
        // Parseval with a Gaussian damper: ∫ u3(x,1) e^{−εx²} dx equals
        // (1/2π) ∫ cos(ξ³) √(π/ε) e^{−ξ²/(4ε)} dξ.
        let eps = 0.01;
        let lhs = quad::integrate(|x| u3(x, 1.0).unwrap() * (-eps * x * x).exp(), -60.0, 60.0, 1e-10, 4000)
            .unwrap()
            .value;
        let rhs = quad::integrate(
            |xi| (xi * xi * xi).cos() * (PI / eps).sqrt() * (-xi * xi / (4.0 * eps)).exp(),
            -3.0,
            3.0,
            1e-12,
            4000,
        )
        .unwrap()
        .value
            / (2.0 * PI);
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
        assert!((rhs - 1.0).abs() < 1e-3);
    }

    #[test]
    fn odd_probabilistic_route() {
        for &x in &[1.0, 0.4, 2.5, -0.5, -1.0, -2.0] {
            let a = u_odd_prob_rep(odd(1), x, 1.0, tol()).unwrap();
            let b = u3(x, 1.0).unwrap();
            assert!((a - b).abs() < 1e-6, "x={x}: {a} vs {b}");
        }
        let p = u_odd_prob_rep(odd(1), 1.0, 1.0, tol()).unwrap();
        let m = u_odd_prob_rep(odd(1), -1.0, 1.0, tol()).unwrap();
        assert!((p - m).abs() > 1e-3);
        assert!(matches!(u_odd_prob_rep(odd(1), -40.0, 1.0, tol()), Err(Error::Overflow(_))));
    }

    #[test]
    fn odd_routes_agree_for_higher_orders() {
        for &n in &[2, 3] {
            for &x in &[-1.5, -0.3, 0.6, 2.0] {
                let a = u_odd_prob_rep(odd(n), x, 1.0, tol()).unwrap();
                let b = u_odd(odd(n), x, 1.0, tol()).unwrap();
                assert!((a - b).abs() < 1e-8, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn asymmetry_fades_with_order() {
        let gap = |n| {
            (0..20)
                .map(|i| {
                    let x = 0.1 + 0.1 * i as f64;
                    (u_odd(odd(n), x, 1.0, tol()).unwrap() - u_odd(odd(n), -x, 1.0, tol()).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        };
        let gaps: Vec<f64> = [1, 2, 5, 10].iter().map(|&n| gap(n)).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn skewed_cauchy() {
        let o = odd(1);
        let t = 1.3;
        let mode = cauchy_skewed_density(o, -t * o.b, t).unwrap();
        assert!((mode - 1.0 / (PI * t * o.a)).abs() < 1e-15);
        let v = cauchy_skewed_density(o, 0.0, 1.0).unwrap();
        assert!((v - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        // Mass over ℝ via x = tan(u).
        let m = quad::integrate(
            |u: f64| cauchy_skewed_density(o, u.tan(), t).unwrap() / u.cos().powi(2),
            -PI / 2.0,
            PI / 2.0,
            1e-12,
            2000,
        )
        .unwrap()
        .value;
        assert!((m - 1.0).abs() < 1e-8);
        assert!(cauchy_skewed_density(even(1), 0.0, 1.0).is_err());
    }

    #[test]
    fn time_floor() {
        assert!(matches!(u_even(even(2), 0.0, 1e-8, tol()), Err(Error::NonConvergence(_))));
        assert!(matches!(u_even(even(2), 0.0, -1.0, tol()), Err(Error::Domain(_))));
    }
}
