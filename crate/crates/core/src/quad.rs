//! Adaptive Gauss–Kronrod quadrature.
//!
//! Every integral in the crate goes through [`integrate`] or one of the
//! interval helpers built on it. The 10/21-point pair gives an error
//! estimate per panel; panels are bisected on a priority queue until the
//! summed estimate drops under the requested absolute tolerance.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, ..., 9).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of a quadrature: value and estimated absolute error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
pub fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).abs();
    Estimate { value, error }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `max_panels` bounds the work; exceeding it is a non-convergence error
/// unless the final estimate is already within `10 * tol`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let first = gk21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut err = first.error;
    heap.push(Panel { a, b, est: first });
    let mut panels = 1;
    while err > tol {
        if panels >= max_panels {
            if err <= 10.0 * tol {
                break;
            }
            return Err(Error::NonConvergence(format!(
                "quadrature on [{a}, {b}] stalled at error {err:e} (tol {tol:e})"
            )));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in f64.
            heap.push(worst);
            break;
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        total += left.value + right.value - worst.est.value;
        err += left.error + right.error - worst.est.error;
        heap.push(Panel { a: worst.a, b: mid, est: left });
        heap.push(Panel { a: mid, b: worst.b, est: right });
        panels += 1;
        if panels % 64 == 0 {
            // Re-sum to shed accumulated rounding in the running totals.
            total = heap.iter().map(|p| p.est.value).sum();
            err = heap.iter().map(|p| p.est.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.est.value).sum();
    let error: f64 = heap.iter().map(|p| p.est.error).sum();
    let _ = total;
    Ok(Estimate { value, error })
}

/// Integrate over `[a, b]` after splitting it into `pieces` equal panels,
/// each integrated adaptively. Used for oscillatory integrands where the
/// panel width should track the local wavelength.
pub fn integrate_split<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    pieces: usize,
    tol: f64,
) -> Result<Estimate> {
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let per = tol / pieces as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for i in 0..pieces {
        let lo = a + h * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + h };
        let e = integrate(&mut f, lo, hi, per, 200)?;
        value += e.value;
        error += e.error;
    }
    Ok(Estimate { value, error })
}

/// Integral over `[a, ∞)` via the map `x = a + s / (1 - s)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    tol: f64,
) -> Result<Estimate> {
    integrate(
        |s| {
            let one_minus = 1.0 - s;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = a + s / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
        4000,
    )
}

/// Composite Simpson rule with `n` (rounded up to even) subintervals.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n.max(2) } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}
