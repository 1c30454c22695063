//! Browser bindings. Each export returns a flat `Float64Array` of
//! column-major data so the page can plot it without further parsing;
//! the plain functions underneath are what the native tests exercise.

use mirror_qbm::dispersion::{dirichlet_dispersion, uniform_grid, velocity_dispersion_at};
use mirror_qbm::medium::reflection;
use mirror_qbm::scattering::{evolve_pulse, PulseSpec};
use mirror_qbm::{DrudeParams, PerfectMirror, QuadratureConfig};
use wasm_bindgen::prelude::*;

/// Largest grid the page may request; keeps a single call interactive.
pub const MAX_POINTS: usize = 2000;

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points, got {steps}"));
    }
    uniform_grid(lo, hi, steps).map_err(|e| e.to_string())
}

/// `[τ/x…, ⟨v²⟩m²/g²…, mirror…]` for `τ ∈ [0, tau_max·x]`, lengths in units of `x`.
/// The mirror column is NaN at `τ = 2x`.
pub fn dispersion_columns(sigma0_x: f64, b_over_x: f64, tau_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    let p = DrudeParams::new(sigma0_x, b_over_x).map_err(|e| e.to_string())?;
    let taus = grid(0.0, tau_max, steps)?;
    let cfg = QuadratureConfig::default().with_rel_tol(1e-7);
    let mut medium = Vec::with_capacity(taus.len());
    let mut mirror = Vec::with_capacity(taus.len());
    for &tau in &taus {
        medium.push(
            velocity_dispersion_at(tau, 1.0, &p, &cfg)
                .map_err(|e| e.to_string())?
                .value,
        );
        mirror.push(dirichlet_dispersion(tau, 1.0, 1.0).unwrap_or(f64::NAN));
    }
    Ok([taus, medium, mirror].concat())
}

/// `[ωb…, |R|…, arg R…]` on a log grid over `[10^lo, 10^hi]/b`.
pub fn reflection_columns(sigma0_b: f64, lo_decade: f64, hi_decade: f64, steps: usize) -> Result<Vec<f64>, String> {
    let p = DrudeParams::new(sigma0_b, 1.0).map_err(|e| e.to_string())?;
    let omegas: Vec<f64> = grid(lo_decade, hi_decade, steps)?
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect();
    let mut modulus = Vec::with_capacity(omegas.len());
    let mut phase = Vec::with_capacity(omegas.len());
    for &w in &omegas {
        let r = reflection(w, &p).map_err(|e| e.to_string())?;
        modulus.push(r.norm());
        phase.push(r.arg());
    }
    Ok([omegas, modulus, phase].concat())
}

/// `[x/ℓ…, φ_medium…, φ_mirror…]` at time `t` (units of `ℓ`) for a Gaussian
/// started at `x0 = 10ℓ` against a medium with `b = ℓ`; fields scaled so
/// the initial peak is 1.
pub fn pulse_columns(sigma0_ell: f64, t: f64, x_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    let p = DrudeParams::new(sigma0_ell, 1.0).map_err(|e| e.to_string())?;
    let pulse = PulseSpec::gaussian(10.0, 1.0).map_err(|e| e.to_string())?;
    let xs = grid(x_max / steps.max(1) as f64, x_max, steps)?;
    let cfg = QuadratureConfig::default();
    let norm = (2.0 * std::f64::consts::PI).sqrt();
    let medium = evolve_pulse(&pulse, t, &xs, &p, &cfg).map_err(|e| e.to_string())?;
    let mirror = evolve_pulse(&pulse, t, &xs, &PerfectMirror, &cfg).map_err(|e| e.to_string())?;
    let scale = |v: Vec<f64>| v.into_iter().map(|y| norm * y).collect::<Vec<_>>();
    Ok([xs, scale(medium.values), scale(mirror.values)].concat())
}

#[wasm_bindgen]
pub fn dispersion_curve(sigma0_x: f64, b_over_x: f64, tau_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    dispersion_columns(sigma0_x, b_over_x, tau_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn reflection_spectrum(sigma0_b: f64, lo_decade: f64, hi_decade: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    reflection_columns(sigma0_b, lo_decade, hi_decade, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pulse_snapshot(sigma0_ell: f64, t: f64, x_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    pulse_columns(sigma0_ell, t, x_max, steps).map_err(|e| JsError::new(&e))
}
