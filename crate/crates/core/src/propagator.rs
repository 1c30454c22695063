//! Frequency-domain Green functions and the renormalized two-point function
//! of the field on the vacuum side `x > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::{refractive_index, DrudeParams, Reflectivity};
use crate::quadrature::{IntegralResult, QuadratureConfig};
use crate::spectral::{Envelope, Part, PhaseIntegral, PhaseTerm};

/// Two spacetime points `(t, x)` and `(t', x')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePair {
    pub t: f64,
    pub x: f64,
    pub t_prime: f64,
    pub x_prime: f64,
}

impl SpacetimePair {
    pub fn new(t: f64, x: f64, t_prime: f64, x_prime: f64) -> Self {
        Self { t, x, t_prime, x_prime }
    }

    pub fn delta_t(&self) -> f64 {
        self.t - self.t_prime
    }

    pub fn delta_x(&self) -> f64 {
        self.x - self.x_prime
    }

    /// `x + x'`, the path length of the wave reflected once at `x = 0`.
    pub fn hat_delta_x(&self) -> f64 {
        self.x + self.x_prime
    }

    /// The pair with the two points exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.t_prime, self.x_prime, self.t, self.x)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.t, self.x, self.t_prime, self.x_prime]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(format!("non-finite spacetime pair {self:?}")));
        }
        if !(self.x > 0.0 && self.x_prime > 0.0) {
            return Err(Error::Unsupported(format!(
                "two-point function needs both points in the vacuum region, got x = {}, x' = {}",
                self.x, self.x_prime
            )));
        }
        Ok(())
    }
}

/// Lower wavenumber cutoff regulating the logarithmic infrared divergence
/// of the massless two-point function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrCutoff {
    k_min: f64,
}

impl IrCutoff {
    pub fn new(k_min: f64) -> Result<Self> {
        if !(k_min > 0.0 && k_min.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k_min must be finite and > 0, got {k_min}"
            )));
        }
        Ok(Self { k_min })
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }
}

/// Causal Green function `G_ω(x, x')` with the source at `x'`.
///
/// Supported configurations: both points in vacuum, or the field point in
/// vacuum and the source inside the medium.
pub fn greens_freq(omega: f64, x: f64, x_prime: f64, p: &DrudeParams) -> Result<Complex64> {
    if x == 0.0 || x_prime == 0.0 {
        return Err(Error::Domain {
            quantity: "Green function",
            parameter: if x == 0.0 { "x" } else { "x_prime" },
            value: 0.0,
        });
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain {
            quantity: "Green function",
            parameter: "omega",
            value: omega,
        });
    }
    let i = Complex64::i();
    match (x > 0.0, x_prime > 0.0) {
        (true, true) => {
            let direct = (i * omega * (x - x_prime).abs()).exp();
            let reflected = p.reflect(omega) * (i * omega * (x + x_prime)).exp();
            Ok(i / (2.0 * omega) * (direct + reflected))
        }
        (true, false) => {
            let n = refractive_index(omega, p)?;
            Ok(i * (i * omega * (x - n * x_prime)).exp() / (omega * (1.0 + n)))
        }
        (false, true) => Err(Error::Unsupported(
            "field point inside the medium with a vacuum source".into(),
        )),
        (false, false) => Err(Error::Unsupported("both points inside the medium".into())),
    }
}

/// Real and imaginary parts of a two-point function with their error
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WightmanValue {
    pub re: IntegralResult,
    pub im: IntegralResult,
}

impl WightmanValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value, self.im.value)
    }

    pub fn error_estimate(&self) -> f64 {
        self.re.error_estimate.hypot(self.im.error_estimate)
    }
}

/// Reflected part of the Wightman function,
/// `(1/2π) ∫_{k_min}^∞ (dk/k) e^{-ikΔt} Re[R_k e^{ikΔ̂x}]`.
///
/// The result grows like `(1/2π) ln(1/k_min)` as the cutoff is removed.
pub fn wightman_ren<R: Reflectivity + ?Sized>(
    pair: &SpacetimePair,
    refl: &R,
    ir: IrCutoff,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    wightman_ren_detailed(pair, refl, ir, cfg).map(|w| w.value())
}

pub fn wightman_ren_detailed<R: Reflectivity + ?Sized>(
    pair: &SpacetimePair,
    refl: &R,
    ir: IrCutoff,
    cfg: &QuadratureConfig,
) -> Result<WightmanValue> {
    pair.validate()?;
    cfg.validate()?;
    let dt = pair.delta_t();
    let xh = pair.hat_delta_x();
    let scale = 1.0 / (2.0 * PI);
    // cos(kΔt) Re z = ½Re[z e^{ikΔt}] + ½Re[z e^{-ikΔt}]
    // sin(kΔt) Re z = ½Im[z e^{ikΔt}] - ½Im[z e^{-ikΔt}]
    let part = |terms: Vec<PhaseTerm>| {
        PhaseIntegral {
            refl,
            terms,
            envelope: Envelope::InverseK,
            lower: ir.k_min,
            log_low: true,
        }
        .evaluate(None, cfg)
        .map(|r| r.scaled(scale))
    };
    let re = part(vec![
        PhaseTerm::new(0.5, xh + dt, Part::Re),
        PhaseTerm::new(0.5, xh - dt, Part::Re),
    ])?;
    let im = part(vec![
        PhaseTerm::new(-0.5, xh + dt, Part::Im),
        PhaseTerm::new(0.5, xh - dt, Part::Im),
    ])?;
    Ok(WightmanValue { re, im })
}

/// `|(1/2π) ∫ R_ω e^{iωΔ̂x} dω|`, which vanishes for a reflection
/// coefficient analytic in the upper half-plane.
pub fn commutator_residual<R: Reflectivity + ?Sized>(
    hat_delta_x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    commutator_integral(hat_delta_x, refl, cfg).map(|r| r.value.abs())
}

/// The signed commutator integral `(1/π) ∫_0^∞ Re[R_ω e^{iωΔ̂x}] dω`.
pub fn commutator_integral<R: Reflectivity + ?Sized>(
    hat_delta_x: f64,
    refl: &R,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if !(hat_delta_x > 0.0 && hat_delta_x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "hat_delta_x must be > 0, got {hat_delta_x}"
        )));
    }
    cfg.validate()?;
    PhaseIntegral {
        refl,
        terms: vec![PhaseTerm::new(1.0, hat_delta_x, Part::Re)],
        envelope: Envelope::Unit,
        lower: 0.0,
        log_low: false,
    }
    .evaluate(None, cfg)
    .map(|r| r.scaled(1.0 / PI))
}
