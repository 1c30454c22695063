//! Back-scattering of wave packets launched from the vacuum side towards
//! the medium.
//!
//! The field at `t, x > 0` is the free evolution of the initial data plus a
//! reflected part
//! `-(1/2π) ∫_0^∞ (dk/k) Im{R_k e^{-ik(t-x)} T(k)}`, where
//! `T(k) = ∫ e^{ikx'} [∂_tφ0 - ikφ0](0, x') dx'`.

use std::f64::consts::PI;

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::medium::{PerfectMirror, Reflectivity};
use crate::quadrature::{integrate_gaussian_damped, integrate_panels, IntegralResult, QuadratureConfig};
use crate::search::golden_section_min;

/// Smallest `x0/ℓ` for which the Gaussian is negligible at the interface
/// at `t = 0`.
pub const MIN_SEPARATION: f64 = 6.0;

/// Field values and time derivatives at `t = 0` on a uniform grid in the
/// vacuum region. The data are taken to vanish outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    x: Vec<f64>,
    phi: Vec<f64>,
    phi_t: Vec<f64>,
}

impl CauchyData {
    pub fn new(x: Vec<f64>, phi: Vec<f64>, phi_t: Vec<f64>) -> Result<Self> {
        if x.len() < 3 || phi.len() != x.len() || phi_t.len() != x.len() {
            return Err(Error::InvalidParameter(
                "Cauchy data need matching grids of at least 3 points".into(),
            ));
        }
        if !(x[0] > 0.0) {
            return Err(Error::Unsupported(
                "initial data must be supported in the vacuum region x > 0".into(),
            ));
        }
        let dx = x[1] - x[0];
        let uniform = x
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dx).abs() <= 1e-9 * dx.abs().max(f64::MIN_POSITIVE) && w[1] > w[0]);
        if !uniform {
            return Err(Error::InvalidParameter(
                "Cauchy data grid must be uniform and increasing".into(),
            ));
        }
        if phi.iter().chain(&phi_t).chain(&x).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Cauchy data must be finite".into()));
        }
        Ok(Self { x, phi, phi_t })
    }

    /// Samples `φ0(0, x)` and `∂_tφ0(0, x)` from closures on `n` points of
    /// `[lo, hi]`.
    pub fn sample(lo: f64, hi: f64, n: usize, phi: impl Fn(f64) -> f64, phi_t: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 || !(hi > lo) {
            return Err(Error::InvalidParameter("need n >= 3 and hi > lo".into()));
        }
        let x: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let p = x.iter().map(|&v| phi(v)).collect();
        let pt = x.iter().map(|&v| phi_t(v)).collect();
        Self::new(x, p, pt)
    }

    fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    /// Trapezoid rule for `∫ e^{ikx'} [∂_tφ0 - ikφ0] dx'`.
    pub fn transform(&self, k: f64) -> Complex64 {
        let dx = self.dx();
        let last = self.x.len() - 1;
        let step = Complex64::from_polar(1.0, k * dx);
        let mut phase = Complex64::from_polar(1.0, k * self.x[0]);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..=last {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            sum += w * phase * Complex64::new(self.phi_t[i], -k * self.phi[i]);
            phase *= step;
        }
        sum * dx
    }

    /// Largest wavenumber resolved by the grid.
    pub fn nyquist(&self) -> f64 {
        PI / self.dx()
    }

    fn interpolate(&self, values: &[f64], at: f64) -> f64 {
        let dx = self.dx();
        let s = (at - self.x[0]) / dx;
        if s < 0.0 || s > (self.x.len() - 1) as f64 {
            return 0.0;
        }
        let i = (s.floor() as usize).min(self.x.len() - 2);
        let w = s - i as f64;
        values[i] * (1.0 - w) + values[i + 1] * w
    }

    /// `∫_{-∞}^{at} ∂_tφ0 dx'` with the same piecewise-linear model.
    fn cumulative_velocity(&self, at: f64) -> f64 {
        let dx = self.dx();
        let s = ((at - self.x[0]) / dx).clamp(0.0, (self.x.len() - 1) as f64);
        let i = (s.floor() as usize).min(self.x.len() - 2);
        let mut sum: f64 = (0..i).map(|j| 0.5 * dx * (self.phi_t[j] + self.phi_t[j + 1])).sum();
        let w = s - i as f64;
        let mid = self.phi_t[i] * (1.0 - w) + self.phi_t[i + 1] * w;
        sum += 0.5 * w * dx * (self.phi_t[i] + mid);
        sum
    }

    /// d'Alembert evolution of the data in empty space.
    fn free_evolution(&self, t: f64, x: f64) -> f64 {
        0.5 * (self.interpolate(&self.phi, x - t) + self.interpolate(&self.phi, x + t))
            + 0.5 * (self.cumulative_velocity(x + t) - self.cumulative_velocity(x - t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseKind {
    /// Leftward Gaussian `A exp[-(t + x - x0)²/2ℓ²]/sqrt(2πℓ²)`.
    Gaussian,
    Tabulated(CauchyData),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub x0: f64,
    pub ell: f64,
    pub amplitude: f64,
    pub kind: PulseKind,
}

impl PulseSpec {
    pub fn gaussian(x0: f64, ell: f64) -> Result<Self> {
        let spec = Self {
            x0,
            ell,
            amplitude: 1.0,
            kind: PulseKind::Gaussian,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Arbitrary data; `x0` and `ell` are kept only as nominal centre and
    /// width for the caller.
    pub fn tabulated(data: CauchyData, x0: f64, ell: f64) -> Result<Self> {
        let spec = Self {
            x0,
            ell,
            amplitude: 1.0,
            kind: PulseKind::Tabulated(data),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell > 0.0 && self.ell.is_finite() && self.x0.is_finite() && self.amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pulse needs finite x0, amplitude and ell > 0, got x0 = {}, ell = {}, amplitude = {}",
                self.x0, self.ell, self.amplitude
            )));
        }
        if matches!(self.kind, PulseKind::Gaussian) && self.x0 < MIN_SEPARATION * self.ell {
            return Err(Error::InvalidParameter(format!(
                "x0/ell = {} is below {MIN_SEPARATION}: the pulse would already touch the medium",
                self.x0 / self.ell
            )));
        }
        Ok(())
    }

    /// Height of the incident pulse.
    pub fn peak(&self) -> f64 {
        match &self.kind {
            PulseKind::Gaussian => self.amplitude.abs() / ((2.0 * PI).sqrt() * self.ell),
            PulseKind::Tabulated(d) => self.amplitude.abs() * d.phi.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        }
    }
}

/// Sampled field at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

fn gaussian(u: f64, ell: f64) -> f64 {
    (-0.5 * u * u / (ell * ell)).exp() / ((2.0 * PI).sqrt() * ell)
}

/// The incident field evolved in empty space, `φ0(t, x)`.
pub fn incident(pulse: &PulseSpec, t: f64, x: f64) -> f64 {
    match &pulse.kind {
        PulseKind::Gaussian => pulse.amplitude * gaussian(t + x - pulse.x0, pulse.ell),
        PulseKind::Tabulated(d) => pulse.amplitude * d.free_evolution(t, x),
    }
}

/// `∫ e^{ikx'} [∂_tφ0 - ikφ0](0, x') dx'`.
pub fn initial_data_transform(pulse: &PulseSpec, k: f64) -> Complex64 {
    match &pulse.kind {
        PulseKind::Gaussian => {
            let ell = pulse.ell;
            Complex64::new(0.0, -2.0 * k * pulse.amplitude)
                * Complex64::from_polar((-0.5 * k * k * ell * ell).exp(), k * pulse.x0)
        }
        PulseKind::Tabulated(d) => pulse.amplitude * d.transform(k),
    }
}

/// The reflected part `φ - φ0` at one point, for any mirror.
pub fn reflected_component<R: Reflectivity + ?Sized>(
    pulse: &PulseSpec,
    t: f64,
    x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    pulse.validate()?;
    cfg.validate()?;
    if !(x > 0.0 && x.is_finite() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need finite t and x > 0, got t = {t}, x = {x}"
        )));
    }
    if refl.is_transparent() || pulse.amplitude == 0.0 {
        return Ok(IntegralResult::zero());
    }
    match &pulse.kind {
        PulseKind::Gaussian => {
            // The 1/k of the general formula cancels against the transform:
            // (A/π) ∫_0^∞ Re[R_k e^{-iku}] e^{-k²ℓ²/2} dk with u = t - x - x0.
            let u = t - x - pulse.x0;
            let g = |k: f64| (refl.reflect(k) * Complex64::from_polar(1.0, -k * u)).re;
            let unit_cfg = QuadratureConfig {
                abs_tol: cfg.abs_tol / pulse.amplitude.abs(),
                ..*cfg
            };
            integrate_gaussian_damped(g, pulse.ell, u.abs(), 1.0, &unit_cfg).map(|r| r.scaled(pulse.amplitude / PI))
        }
        PulseKind::Tabulated(d) => general_reflection(d, pulse.amplitude, t, x, refl, cfg),
    }
}

fn general_reflection<R: Reflectivity + ?Sized>(
    data: &CauchyData,
    amplitude: f64,
    t: f64,
    x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    // Physical data moving into the medium have T(k) = O(k) at small k.
    let t0 = data.transform(0.0).norm();
    let scale = data.transform(data.nyquist() * 0.01).norm().max(f64::MIN_POSITIVE);
    if t0 > 1e-6 * scale {
        return Err(Error::InvalidParameter(format!(
            "initial data transform does not vanish at k = 0 (|T(0)| = {t0:e}); the reflected integral diverges"
        )));
    }
    let k_max = cfg.k_max_override.unwrap_or_else(|| data.nyquist());
    let reach = (t - x).abs() + data.x[data.x.len() - 1];
    let panels = ((k_max * reach / PI).ceil() as usize).clamp(1, cfg.max_subdivisions / 2);
    let integrand = |k: f64| (refl.reflect(k) * Complex64::from_polar(1.0, -k * (t - x)) * data.transform(k)).im / k;
    integrate_panels(integrand, 0.0, k_max, panels, cfg).map(|r| r.scaled(-amplitude / (2.0 * PI)))
}

/// The full field `φ(t, x)` on a grid of vacuum points.
pub fn evolve_pulse<R: Reflectivity + ?Sized>(
    pulse: &PulseSpec,
    t: f64,
    x_grid: &[f64],
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<FieldSnapshot> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be finite and >= 0, got {t}")));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("x grid must be strictly increasing".into()));
    }
    let point = |&x: &f64| {
        reflected_component(pulse, t, x, refl, cfg)
            .map(|r| (incident(pulse, t, x) + r.value, r.error_estimate))
            .map_err(|e| e.at(format!("t = {t}, x = {x}")))
    };
    #[cfg(feature = "parallel")]
    let pairs: Result<Vec<(f64, f64)>> = x_grid.par_iter().map(point).collect();
    #[cfg(not(feature = "parallel"))]
    let pairs: Result<Vec<(f64, f64)>> = x_grid.iter().map(point).collect();
    let (values, error_estimates) = pairs?.into_iter().unzip();
    Ok(FieldSnapshot {
        t,
        x_grid: x_grid.to_vec(),
        values,
        error_estimates,
    })
}

/// Time at which `|reflected_component|` peaks at `x` within `window`.
pub fn reflected_peak_time<R: Reflectivity + ?Sized>(
    pulse: &PulseSpec,
    x: f64,
    window: (f64, f64),
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (lo, hi) = window;
    if !(hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Window(format!("invalid window [{lo}, {hi}]")));
    }
    const SCAN: usize = 64;
    let step = (hi - lo) / SCAN as f64;
    let magnitude = |t: f64| reflected_component(pulse, t, x, refl, cfg).map(|r| r.value.abs());
    let samples: Vec<f64> = (0..=SCAN)
        .map(|i| magnitude(lo + step * i as f64))
        .collect::<Result<_>>()?;
    let best = samples
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > samples[b] { i } else { b });
    if best == 0 || best == SCAN {
        return Err(Error::Window(format!(
            "reflected signal at x = {x} has no interior maximum in [{lo}, {hi}]"
        )));
    }
    let a = lo + step * (best - 1) as f64;
    let b = lo + step * (best + 1) as f64;
    golden_section_min(|t| magnitude(t).map(|m| -m), a, b, 1e-9 * (1.0 + hi.abs())).map(|(t, _)| t)
}

/// Arrival-time lag of the reflected peak relative to a perfect mirror.
pub fn pulse_delay<R: Reflectivity + ?Sized>(
    pulse: &PulseSpec,
    refl: &R,
    probe_x: f64,
    t_window: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let medium = reflected_peak_time(pulse, probe_x, t_window, refl, cfg)?;
    let mirror = reflected_peak_time(pulse, probe_x, t_window, &PerfectMirror, cfg)?;
    Ok(medium - mirror)
}
