//! Velocity dispersion of a point charge held at distance `x` from the
//! interface and released for a time `τ`.
//!
//! Results are given in units of `g²/m²` times [`ProbeConfig::coupling`]
//! squared, so `coupling = 1` yields `⟨v²⟩·m²/g²`.

use std::f64::consts::PI;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::Reflectivity;
use crate::quadrature::{IntegralResult, QuadratureConfig};
use crate::search::{argmin, golden_section_min};
use crate::spectral::{Envelope, Part, PhaseIntegral, PhaseTerm};

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Charge-to-mass ratio `g/m`.
    pub coupling: f64,
    /// Distance from the interface.
    pub x: f64,
    pub tau_grid: Vec<f64>,
}

impl ProbeConfig {
    pub fn new(coupling: f64, x: f64, tau_grid: Vec<f64>) -> Result<Self> {
        let probe = Self { coupling, x, tau_grid };
        probe.validate()?;
        Ok(probe)
    }

    /// `steps` equally spaced times from `tau_min` to `tau_max` inclusive.
    pub fn uniform(coupling: f64, x: f64, tau_min: f64, tau_max: f64, steps: usize) -> Result<Self> {
        Self::new(coupling, x, uniform_grid(tau_min, tau_max, steps)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coupling.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling must be finite, got {}",
                self.coupling
            )));
        }
        check_distance(self.x)?;
        for (i, &tau) in self.tau_grid.iter().enumerate() {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "tau[{i}] = {tau} must be finite and >= 0"
                )));
            }
            if i > 0 && tau < self.tau_grid[i - 1] {
                return Err(Error::InvalidParameter("tau grid must be sorted".into()));
            }
        }
        Ok(())
    }
}

/// `steps` equally spaced points on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::InvalidParameter(format!("bad grid range [{lo}, {hi}]")));
    }
    match steps {
        0 => Err(Error::InvalidParameter("grid needs at least one point".into())),
        1 => Ok(vec![lo]),
        n => Ok((0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()),
    }
}

/// Timescale of the smooth switching profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingSpec {
    tau_s: f64,
}

impl SwitchingSpec {
    pub fn new(tau_s: f64) -> Result<Self> {
        if !(tau_s >= 0.0 && tau_s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tau_s must be finite and >= 0, got {tau_s}"
            )));
        }
        Ok(Self { tau_s })
    }

    /// Sudden switching, `F = Θ(t)Θ(τ - t)`.
    pub fn sudden() -> Self {
        Self { tau_s: 0.0 }
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }
}

fn check_distance(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("x must be finite and > 0, got {x}")));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tau must be finite and >= 0, got {tau}"
        )));
    }
    Ok(())
}

/// `-(1/π) ∫_0^∞ (1 - cos kτ)/k · Re[R_k e^{2ikx}] dk` for unit coupling.
pub fn velocity_dispersion_at<R: Reflectivity + ?Sized>(
    tau: f64,
    x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    check_tau(tau)?;
    check_distance(x)?;
    if tau == 0.0 {
        return Ok(IntegralResult::zero());
    }
    // (1 - cos kτ) Re z = Re z - ½Re[z e^{ikτ}] - ½Re[z e^{-ikτ}], z = R e^{2ikx}
    let integral = PhaseIntegral {
        refl,
        terms: vec![
            PhaseTerm::new(1.0, 2.0 * x, Part::Re),
            PhaseTerm::new(-0.5, 2.0 * x + tau, Part::Re),
            PhaseTerm::new(-0.5, 2.0 * x - tau, Part::Re),
        ],
        envelope: Envelope::InverseK,
        lower: 0.0,
        log_low: false,
    };
    // Near k = 0 the three terms cancel; 1 - cos kτ = 2 sin²(kτ/2) does not.
    let low = |k: f64| {
        let s = (0.5 * k * tau).sin();
        let z = refl.reflect(k) * num_complex::Complex64::from_polar(1.0, 2.0 * k * x);
        2.0 * s * s / k * z.re
    };
    integral.evaluate(Some(&low), cfg).map(|r| r.scaled(-1.0 / PI))
}

/// The dispersion at every point of the probe's `τ` grid, with error estimates.
pub fn velocity_dispersion_detailed<R: Reflectivity + ?Sized>(
    probe: &ProbeConfig,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<Vec<IntegralResult>> {
    probe.validate()?;
    cfg.validate()?;
    let g2 = probe.coupling * probe.coupling;
    let point = |&tau: &f64| {
        velocity_dispersion_at(tau, probe.x, refl, cfg)
            .map(|r| r.scaled(g2))
            .map_err(|e| e.at(format!("tau = {tau}, x = {}", probe.x)))
    };
    #[cfg(feature = "parallel")]
    let out = probe.tau_grid.par_iter().map(point).collect();
    #[cfg(not(feature = "parallel"))]
    let out = probe.tau_grid.iter().map(point).collect();
    out
}

pub fn velocity_dispersion<R: Reflectivity + ?Sized>(
    probe: &ProbeConfig,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    velocity_dispersion_detailed(probe, refl, cfg).map(|v| v.into_iter().map(|r| r.value).collect())
}

/// Perfect-mirror dispersion `(g²/2πm²) ln|1 - τ²/4x²|`, singular at `τ = 2x`.
pub fn dirichlet_dispersion(tau: f64, x: f64, coupling: f64) -> Result<f64> {
    check_tau(tau)?;
    check_distance(x)?;
    let arg = 1.0 - tau * tau / (4.0 * x * x);
    if arg == 0.0 {
        return Err(Error::Singular(format!(
            "perfect-mirror dispersion diverges at tau = 2x = {tau}"
        )));
    }
    Ok(coupling * coupling / (2.0 * PI) * arg.abs().ln())
}

/// Perfect-mirror dispersion with the smooth switching profile of width `τ_s`.
pub fn switched_dispersion(tau: f64, x: f64, sw: SwitchingSpec, coupling: f64) -> Result<f64> {
    check_tau(tau)?;
    check_distance(x)?;
    let ts = sw.tau_s;
    if ts == 0.0 {
        return dirichlet_dispersion(tau, x, coupling);
    }
    let t2 = tau * tau;
    let x2 = 4.0 * x * x;
    let s2 = ts * ts;
    let num = (t2 - x2).powi(2) + 8.0 * (t2 + x2) * s2 + 16.0 * s2 * s2;
    let den = 16.0 * (x * x + s2).powi(2);
    Ok(coupling * coupling / (4.0 * PI) * (num / den).ln())
}

/// `F(t) = [arctan(t/τ_s) + arctan((τ - t)/τ_s)]/π`, tending to the box
/// `Θ(t)Θ(τ - t)` as `τ_s → 0`.
pub fn switching_profile(t: f64, tau: f64, sw: SwitchingSpec) -> f64 {
    let ts = sw.tau_s;
    if ts == 0.0 {
        return match t {
            t if t > 0.0 && t < tau => 1.0,
            t if t == 0.0 || t == tau => 0.5,
            _ => 0.0,
        };
    }
    ((t / ts).atan() + ((tau - t) / ts).atan()) / PI
}

/// Number of sign changes of the first difference of `curve` among the
/// points with `τ > tau_threshold`.
///
/// With `expected_period` set, the sampling is checked to hold at least 20
/// points per period.
pub fn oscillation_detector(curve: &[(f64, f64)], tau_threshold: f64, expected_period: Option<f64>) -> Result<usize> {
    let tail: Vec<(f64, f64)> = curve.iter().copied().filter(|&(t, _)| t > tau_threshold).collect();
    if let Some(period) = expected_period {
        let needed = period / 20.0;
        if let Some(w) = tail.windows(2).find(|w| w[1].0 - w[0].0 > needed * (1.0 + 1e-9)) {
            return Err(Error::Resolution(format!(
                "spacing {} at tau = {} exceeds period/20 = {needed}",
                w[1].0 - w[0].0,
                w[0].0
            )));
        }
    }
    let mut count = 0;
    let mut previous = 0.0_f64;
    for w in tail.windows(2) {
        let d = w[1].1 - w[0].1;
        if d == 0.0 {
            continue;
        }
        if previous != 0.0 && d.signum() != previous.signum() {
            count += 1;
        }
        previous = d;
    }
    Ok(count)
}

/// Location of the deepest point of a sampled dispersion curve, refined by
/// golden-section search between the neighbours of the discrete minimum
/// to within `10⁻³ x`.
pub fn locate_valley<R: Reflectivity + ?Sized>(
    curve: &[(f64, f64)],
    x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let values: Vec<f64> = curve.iter().map(|p| p.1).collect();
    let i = argmin(&values).ok_or_else(|| Error::Window("curve has no finite values".into()))?;
    if i == 0 || i == curve.len() - 1 {
        return Ok(curve[i]);
    }
    golden_section_min(
        |tau| velocity_dispersion_at(tau, x, refl, cfg).map(|r| r.value),
        curve[i - 1].0,
        curve[i + 1].0,
        1e-3 * x,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{DrudeParams, PerfectMirror};

    fn drude(s: f64, b: f64) -> DrudeParams {
        DrudeParams::new(s, b).unwrap()
    }

    #[test]
    fn zero_time_is_exactly_zero() {
        let r = velocity_dispersion_at(0.0, 1.0, &drude(10.0, 1.0), &QuadratureConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn perfect_mirror_reproduces_closed_form() {
        let cfg = QuadratureConfig::default();
        for tau in [0.5, 1.0, 1.5, 3.0, 5.0] {
            let num = velocity_dispersion_at(tau, 1.0, &PerfectMirror, &cfg).unwrap().value;
            let exact = dirichlet_dispersion(tau, 1.0, 1.0).unwrap();
            assert!((num - exact).abs() < 1e-7, "tau={tau}: {num} vs {exact}");
        }
    }

    #[test]
    fn dirichlet_special_points() {
        assert_eq!(dirichlet_dispersion(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(dirichlet_dispersion(2.0 * 2f64.sqrt(), 1.0, 1.0).unwrap().abs() < 1e-15);
        assert!(matches!(dirichlet_dispersion(2.0, 1.0, 1.0), Err(Error::Singular(_))));
        assert!(dirichlet_dispersion(2.0 - 1e-12, 1.0, 1.0).unwrap() < -4.0);
    }

    #[test]
    fn switched_closed_form_values() {
        let sw = SwitchingSpec::new(0.1).unwrap();
        assert!(switched_dispersion(0.0, 1.0, sw, 1.0).unwrap().abs() < 1e-15);
        let v = switched_dispersion(2.0, 1.0, sw, 1.0).unwrap();
        assert!((v - (0.0401f64 / 1.0201).ln() / (4.0 * PI)).abs() < 1e-14);
        assert!((v + 0.2575).abs() < 1e-4);
        let tiny = SwitchingSpec::new(1e-6).unwrap();
        for tau in [0.5, 1.5, 3.0] {
            let a = switched_dispersion(tau, 1.0, tiny, 1.0).unwrap();
            let b = dirichlet_dispersion(tau, 1.0, 1.0).unwrap();
            assert!((a - b).abs() < 1e-6);
        }
        assert_eq!(
            switched_dispersion(1.5, 1.0, SwitchingSpec::sudden(), 1.0).unwrap(),
            dirichlet_dispersion(1.5, 1.0, 1.0).unwrap()
        );
    }

    #[test]
    fn switching_profile_limits() {
        let sharp = SwitchingSpec::new(1e-9).unwrap();
        assert!((switching_profile(0.5, 1.0, sharp) - 1.0).abs() < 1e-8);
        let wide = SwitchingSpec::new(0.5).unwrap();
        assert!((switching_profile(0.5, 1.0, wide) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn detector_counts_turns() {
        let flat: Vec<_> = (0..50).map(|i| (i as f64 * 0.1, 3.0)).collect();
        assert_eq!(oscillation_detector(&flat, 0.0, None).unwrap(), 0);
        let wave: Vec<_> = (0..200)
            .map(|i| (i as f64 * 0.05, (i as f64 * 0.05 * 2.0).sin()))
            .collect();
        assert_eq!(oscillation_detector(&wave, 0.0, None).unwrap(), 6);
        assert!(matches!(
            oscillation_detector(&wave, 0.0, Some(0.5)),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn coupling_enters_squared() {
        let p = drude(10.0, 1.0);
        let cfg = QuadratureConfig::default();
        let one = velocity_dispersion(&ProbeConfig::new(1.0, 1.0, vec![0.7, 2.5]).unwrap(), &p, &cfg).unwrap();
        let two = velocity_dispersion(&ProbeConfig::new(2.0, 1.0, vec![0.7, 2.5]).unwrap(), &p, &cfg).unwrap();
        for (a, b) in one.iter().zip(&two) {
            assert_eq!(4.0 * a, *b);
        }
    }

    #[test]
    fn probe_validation() {
        assert!(ProbeConfig::new(1.0, 0.0, vec![1.0]).is_err());
        assert!(ProbeConfig::new(1.0, 1.0, vec![2.0, 1.0]).is_err());
        assert!(ProbeConfig::new(1.0, 1.0, vec![-1.0]).is_err());
        assert_eq!(uniform_grid(0.0, 6.0, 601).unwrap()[600], 6.0);
    }
}
