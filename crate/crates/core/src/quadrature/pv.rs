//! Cauchy principal values by symmetric excision.
//!
//! Around the pole the excised strip `[p - h, p + h]` is folded onto
//! `[0, h]`, where `g(p + u) + g(p - u)` is regular: the `1/u` parts cancel
//! pairwise, so the strip contributes exactly its principal value. The
//! computation is repeated with `h/2` and the two results must agree.

use super::kronrod::{integrate, integrate_to_infinity};
use super::{IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};

/// `PV ∫_lower^upper g(s) ds` for `g` with a simple pole at `pole`.
///
/// `upper` may be `f64::INFINITY`, in which case `g` must decay at least as
/// fast as an integrable power.
pub fn principal_value<F: Fn(f64) -> f64>(
    g: F,
    pole: f64,
    lower: f64,
    upper: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if !(lower.is_finite() && pole.is_finite()) || upper.is_nan() {
        return Err(Error::Config(
            "principal value limits must be finite (upper may be +inf)".into(),
        ));
    }
    if !(lower < pole && pole < upper) {
        return Err(Error::Config(format!(
            "pole {pole} must lie strictly inside ({lower}, {upper})"
        )));
    }
    let room = if upper.is_finite() {
        (pole - lower).min(upper - pole)
    } else {
        pole - lower
    };
    let h = 0.5 * room;

    let coarse = excised(&g, pole, lower, upper, h, cfg)?;
    let fine = excised(&g, pole, lower, upper, 0.5 * h, cfg)?;
    let disagreement = (coarse.value - fine.value).abs();
    let allowed = cfg.tolerance_for(fine.value) + coarse.error_estimate + fine.error_estimate;
    if disagreement > allowed {
        return Err(Error::non_convergence(
            format!(
                "principal value at {pole}: excision widths {h:e} and {:e} disagree by {disagreement:e}",
                0.5 * h
            ),
            fine.value,
            disagreement,
        ));
    }
    Ok(IntegralResult {
        error_estimate: fine.error_estimate.max(disagreement),
        ..fine
    })
}

fn excised<F: Fn(f64) -> f64>(
    g: &F,
    pole: f64,
    lower: f64,
    upper: f64,
    h: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let left = integrate(g, lower, pole - h, cfg)?;
    let strip = integrate(|u: f64| g(pole + u) + g(pole - u), 0.0, h, cfg)?;
    let right = if upper.is_finite() {
        integrate(g, pole + h, upper, cfg)?
    } else {
        integrate_to_infinity(g, pole + h, cfg)?
    };
    Ok(left.combine(strip).combine(right))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_pole_vanishes() {
        let res = principal_value(|w| 1.0 / (w - 1.0), 1.0, 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert!(res.value.abs() < 1e-13, "{}", res.value);
    }

    #[test]
    fn shifted_numerator() {
        let res = principal_value(|w| w / (w - 1.0), 1.0, 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert!((res.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_interval() {
        // PV ∫_0^3 ds/(s-1) = ln 2
        let res = principal_value(|s| 1.0 / (s - 1.0), 1.0, 0.0, 3.0, &QuadratureConfig::default()).unwrap();
        assert!((res.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_range() {
        // PV ∫_0^∞ ds / ((s² - 1)(1 + s²)) = -π/4 (partial fractions)
        let g = |s: f64| 1.0 / ((s * s - 1.0) * (1.0 + s * s));
        let res = principal_value(g, 1.0, 0.0, f64::INFINITY, &QuadratureConfig::default()).unwrap();
        assert!((res.value + std::f64::consts::FRAC_PI_4).abs() < 1e-10, "{}", res.value);
    }

    #[test]
    fn pole_outside_is_rejected() {
        let err = principal_value(|s| s, 3.0, 0.0, 2.0, &QuadratureConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
