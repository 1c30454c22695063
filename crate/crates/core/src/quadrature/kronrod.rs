//! Globally adaptive 21-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IntegralResult, QuadratureConfig};
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
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
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

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken by position so the bisection order is fully deterministic.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_k - res_g) * half;
    let value = res_k * half;
    let error = rescale_error(err, res_abs * half.abs(), res_asc * half.abs());
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::non_convergence(
            format!("non-finite integrand on [{a:e}, {b:e}]"),
            value,
            f64::INFINITY,
        ));
    }
    Ok(Segment { a, b, value, error })
}

/// Adaptive integration of `f` over `[a, b]`, refining the segment with the
/// largest error estimate until the total estimate meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    integrate_panels(f, a, b, 1, cfg)
}

/// Like [`integrate`], but starts from `panels` equal sub-intervals. Useful
/// when the integrand oscillates a known number of times over `[a, b]`.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Config(format!("finite limits required, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(IntegralResult {
            k_max_used: b,
            ..IntegralResult::zero()
        });
    }
    let panels = panels.clamp(1, cfg.max_subdivisions);
    let mut heap = BinaryHeap::with_capacity(panels + 2 * cfg.max_subdivisions);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let seg = gk21(&f, lo, hi)?;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    let mut subdivisions = 0;
    while total_err > cfg.tolerance_for(total) {
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::non_convergence(
                format!(
                    "adaptive rule on [{a:e}, {b:e}] hit {} subdivisions",
                    cfg.max_subdivisions
                ),
                total,
                total_err,
            ));
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::non_convergence(
                format!("segment [{:e}, {:e}] cannot be bisected further", worst.a, worst.b),
                total,
                total_err,
            ));
        }
        let left = gk21(&f, worst.a, mid)?;
        let right = gk21(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Re-sum to shed the drift of the running updates.
    let (value, error_estimate) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(IntegralResult {
        value,
        error_estimate,
        k_max_used: b,
        subdivisions_used: subdivisions,
    })
}

/// Integral over `[a, ∞)` through the substitution `k = a + (1 - t) / t`.
///
/// Suited to non-oscillatory integrands with algebraic or faster decay.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !a.is_finite() {
        return Err(Error::Config(format!("finite lower limit required, got {a}")));
    }
    let mapped = |t: f64| {
        let k = a + (1.0 - t) / t;
        f(k) / (t * t)
    };
    let mut res = integrate(mapped, 0.0, 1.0, cfg)?;
    res.k_max_used = f64::INFINITY;
    Ok(res)
}
