//! Fourier-type integrals over half-lines.
//!
//! `∫_a^∞ g(k) trig(αk) dk` is split at the zeros of `trig(αk)` into
//! half-period panels. Each panel is integrated adaptively and the partial
//! sums are accelerated with the epsilon algorithm. If acceleration has not
//! converged by the time the panels reach `k_max`, the sum is truncated
//! there and the analytic algebraic tail bound is added to the error.
//!
//! The envelope `g` must be smooth and free of its own oscillation: a
//! product of two frequencies should be split into single-frequency calls,
//! otherwise the accelerated sum can converge slower than its error
//! estimate suggests.

use std::f64::consts::PI;

use super::epsilon::EpsilonTable;
use super::kronrod::{integrate, integrate_panels, integrate_to_infinity};
use super::{DecayHint, IntegralResult, QuadratureConfig, Trig};
use crate::error::{Error, Result};

const EPSILON_WINDOW: usize = 40;
const PANEL_REL_FLOOR: f64 = 2e-14;
/// Relative rounding level of the running sum, scaled by its largest partial.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

pub fn integrate_oscillatory<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    kind: Trig,
    decay: Option<DecayHint>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    integrate_oscillatory_from(g, 0.0, alpha, kind, decay, cfg)
}

fn resolve_cutoff(decay: Option<DecayHint>, lower: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match (cfg.k_max_override, decay) {
        (Some(k), _) => Ok(k),
        (None, None) => Err(Error::Config(
            "an asymptotic decay hint or an explicit k_max is required".into(),
        )),
        (None, Some(hint)) => {
            if hint.power < cfg.tail_exponent_floor {
                return Err(Error::Config(format!(
                    "decay power {} is below the configured floor {}; supply k_max_override",
                    hint.power, cfg.tail_exponent_floor
                )));
            }
            Ok(hint.cutoff(cfg.abs_tol).max(lower))
        }
    }
}

/// `∫_lower^∞ g(k)·trig(αk) dk`.
///
/// A negative `alpha` is folded into the sign of the sine weight.
pub fn integrate_oscillatory_from<F: Fn(f64) -> f64>(
    g: F,
    lower: f64,
    alpha: f64,
    kind: Trig,
    decay: Option<DecayHint>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if !lower.is_finite() || !alpha.is_finite() {
        return Err(Error::Config(format!(
            "lower = {lower}, alpha = {alpha} must be finite"
        )));
    }
    let k_max = resolve_cutoff(decay, lower, cfg)?;
    let sign = if alpha < 0.0 && kind == Trig::Sin { -1.0 } else { 1.0 };
    let alpha = alpha.abs();

    if alpha == 0.0 {
        return match kind {
            Trig::Sin => Ok(IntegralResult::zero()),
            Trig::Cos => non_oscillatory(&g, lower, k_max, decay, cfg),
        };
    }
    if k_max <= lower {
        return Ok(IntegralResult {
            error_estimate: decay.map_or(0.0, |h| h.tail_bound(lower)),
            k_max_used: lower,
            ..IntegralResult::zero()
        });
    }

    let half_period = PI / alpha;
    let offset = match kind {
        Trig::Cos => 0.5,
        Trig::Sin => 0.0,
    };
    let integrand = |k: f64| g(k) * kind.eval(alpha * k);
    // The sum is usually far smaller than its first panels, so each panel
    // is resolved well beyond the target relative accuracy.
    let panel_cfg = QuadratureConfig {
        rel_tol: (1e-3 * cfg.rel_tol).max(PANEL_REL_FLOOR),
        abs_tol: 0.1 * cfg.abs_tol,
        ..*cfg
    };

    let mut zero_index = ((lower / half_period) - offset).floor() + 1.0;
    let mut a = lower;
    let mut partial = 0.0;
    let mut magnitude = 0.0_f64;
    let mut panel_errors = 0.0;
    let mut subdivisions = 0;
    let mut table = EpsilonTable::new(EPSILON_WINDOW);
    let mut converged_streak = 0;
    let mut small_streak = 0;
    let mut last_panel = 0.0_f64;
    let mut before_last_panel = f64::INFINITY;

    for _ in 0..cfg.max_subdivisions {
        let zero = (zero_index + offset) * half_period;
        let truncated = zero >= k_max;
        let b = if truncated { k_max } else { zero };
        let panel = integrate(integrand, a, b, &panel_cfg)?;
        partial += panel.value;
        magnitude = magnitude.max(partial.abs());
        panel_errors += panel.error_estimate;
        subdivisions += panel.subdivisions_used + 1;

        if truncated {
            let tail = decay.map_or(0.0, |h| h.tail_bound(k_max));
            return Ok(IntegralResult {
                value: sign * partial,
                error_estimate: panel_errors + tail,
                k_max_used: k_max,
                subdivisions_used: subdivisions,
            });
        }

        // Contributions already below tolerance: the raw sum has converged
        // and extrapolating would only amplify rounding noise.
        if panel.value.abs() <= cfg.tolerance_for(partial) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(IntegralResult {
                    value: sign * partial,
                    error_estimate: panel_errors + last_panel.abs() + panel.value.abs() + ROUNDOFF * magnitude,
                    k_max_used: b,
                    subdivisions_used: subdivisions,
                });
            }
        } else {
            small_streak = 0;
        }
        // Extrapolation can assign a finite value to a divergent sum; only
        // trust it while the panel contributions are shrinking.
        let shrinking = panel.value.abs() <= before_last_panel;
        before_last_panel = last_panel.abs();
        last_panel = panel.value;

        if let Some((estimate, extrapolation_error)) = table.push(partial) {
            let error = extrapolation_error + panel_errors + ROUNDOFF * magnitude;
            if shrinking && estimate.is_finite() && error <= cfg.tolerance_for(estimate) {
                converged_streak += 1;
                if converged_streak >= 2 {
                    return Ok(IntegralResult {
                        value: sign * estimate,
                        error_estimate: error,
                        k_max_used: f64::INFINITY,
                        subdivisions_used: subdivisions,
                    });
                }
            } else {
                converged_streak = 0;
            }
        }
        a = b;
        zero_index += 1.0;
    }

    Err(Error::non_convergence(
        format!(
            "oscillatory sum with alpha = {alpha:e} did not settle within {} panels (reached k = {a:e})",
            cfg.max_subdivisions
        ),
        sign * partial,
        f64::INFINITY,
    ))
}

fn non_oscillatory<F: Fn(f64) -> f64>(
    g: &F,
    lower: f64,
    k_max: f64,
    decay: Option<DecayHint>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if cfg.k_max_override.is_some() {
        let mut res = integrate(g, lower, k_max, cfg)?;
        res.error_estimate += decay.map_or(0.0, |h| h.tail_bound(k_max));
        Ok(res)
    } else {
        integrate_to_infinity(g, lower, cfg)
    }
}

/// `∫_0^∞ g(k)·exp(-k²w²/2) dk` for `|g| <= envelope_bound`.
///
/// The Gaussian lets the half-line be cut once its tail falls below
/// `abs_tol / 100`; the cut interval is pre-split so that each panel holds
/// about half a period of the fastest oscillation `max_frequency` in `g`.
pub fn integrate_gaussian_damped<F: Fn(f64) -> f64>(
    g: F,
    width: f64,
    max_frequency: f64,
    envelope_bound: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Config(format!("gaussian width must be positive, got {width}")));
    }
    let bound = envelope_bound.abs().max(f64::MIN_POSITIVE);
    let tail_tol = 0.01 * cfg.abs_tol;
    let tail = |k: f64| bound * (-0.5 * k * k * width * width).exp() / (k * width * width);
    let mut cutoff = (2.0 * (bound / (tail_tol * width)).ln().max(1.0)).sqrt() / width;
    while tail(cutoff) > tail_tol {
        cutoff *= 1.1;
    }
    let panels = ((cutoff * max_frequency.abs() / PI).ceil() as usize).max(1);
    let integrand = |k: f64| g(k) * (-0.5 * k * k * width * width).exp();
    let mut res = integrate_panels(integrand, 0.0, cutoff, panels, cfg)?;
    res.error_estimate += tail(cutoff);
    Ok(res)
}
