//! Wavenumber integrals of the reflected-wave phase `R_k e^{iβk}`.
//!
//! The observables in this crate are all of the form
//! `∫_lower^∞ w(k) Σ_j c_j Part[R_k e^{iβ_j k}] dk` with `w ∈ {1, 1/k}`.
//! The range is split at `K0`, roughly a quarter period of the fastest
//! phase. Below `K0` the combined integrand is integrated adaptively; above
//! it every term is expanded into `cos(βk)` and `sin(βk)` pieces with a
//! single frequency each and handed to the oscillatory panel engine.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::Reflectivity;
use crate::quadrature::{
    integrate, integrate_oscillatory_from, integrate_to_infinity, DecayHint, IntegralResult, QuadratureConfig, Trig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PhaseTerm {
    pub weight: f64,
    pub beta: f64,
    pub part: Part,
}

impl PhaseTerm {
    pub fn new(weight: f64, beta: f64, part: Part) -> Self {
        Self { weight, beta, part }
    }

    fn eval(&self, r: Complex64, k: f64) -> f64 {
        let z = r * Complex64::from_polar(1.0, self.beta * k);
        self.weight
            * match self.part {
                Part::Re => z.re,
                Part::Im => z.im,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Envelope {
    Unit,
    InverseK,
}

impl Envelope {
    fn eval(self, k: f64) -> f64 {
        match self {
            Envelope::Unit => 1.0,
            Envelope::InverseK => 1.0 / k,
        }
    }

    fn extra_power(self) -> f64 {
        match self {
            Envelope::Unit => 0.0,
            Envelope::InverseK => 1.0,
        }
    }
}

pub(crate) struct PhaseIntegral<'a, R: Reflectivity + ?Sized> {
    pub refl: &'a R,
    pub terms: Vec<PhaseTerm>,
    pub envelope: Envelope,
    pub lower: f64,
    /// Integrate the low-wavenumber part in `ln k` (requires `lower > 0`).
    pub log_low: bool,
}

impl<R: Reflectivity + ?Sized> PhaseIntegral<'_, R> {
    fn combined(&self, k: f64) -> f64 {
        let r = self.refl.reflect(k);
        self.envelope.eval(k) * self.terms.iter().map(|t| t.eval(r, k)).sum::<f64>()
    }

    pub fn split_point(&self) -> f64 {
        let beta_max = self.terms.iter().fold(0.0_f64, |m, t| m.max(t.beta.abs()));
        if beta_max > 0.0 {
            self.lower + 0.5 * PI / beta_max
        } else {
            self.lower + 1.0
        }
    }

    /// Evaluates the integral. `low` replaces the combined integrand below
    /// the split point (it must include the envelope), for callers with a
    /// cancellation-free form near `k = 0`.
    pub fn evaluate(&self, low: Option<&dyn Fn(f64) -> f64>, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        if self.refl.is_transparent() || self.terms.is_empty() {
            return Ok(IntegralResult::zero());
        }
        let split = self.split_point();
        let head = {
            let f = |k: f64| match low {
                Some(l) => l(k),
                None => self.combined(k),
            };
            if self.log_low {
                if !(self.lower > 0.0) {
                    return Err(Error::Config("logarithmic head needs a positive lower limit".into()));
                }
                integrate(
                    |s: f64| {
                        let k = s.exp();
                        f(k) * k
                    },
                    self.lower.ln(),
                    split.ln(),
                    cfg,
                )?
            } else {
                integrate(f, self.lower, split, cfg)?
            }
        };

        let asymptote = self.refl.asymptote();
        let mut total = head;
        for term in &self.terms {
            // Re[R e^{iβk}] = Re R cos βk - Im R sin βk
            // Im[R e^{iβk}] = Im R cos βk + Re R sin βk
            let pieces = match term.part {
                Part::Re => [(Part::Re, 1.0, Trig::Cos), (Part::Im, -1.0, Trig::Sin)],
                Part::Im => [(Part::Im, 1.0, Trig::Cos), (Part::Re, 1.0, Trig::Sin)],
            };
            for (component, sign, kind) in pieces {
                let envelope = match component {
                    Part::Re => asymptote.re,
                    Part::Im => asymptote.im,
                };
                let Some((coefficient, power)) = envelope else {
                    continue;
                };
                let g = |k: f64| {
                    let r = self.refl.reflect(k);
                    let c = match component {
                        Part::Re => r.re,
                        Part::Im => r.im,
                    };
                    c * self.envelope.eval(k)
                };
                let piece = self.tail_piece(
                    g,
                    term.beta,
                    kind,
                    DecayHint::new(coefficient, power + self.envelope.extra_power()),
                    split,
                    cfg,
                )?;
                total = total.combine(piece.scaled(sign * term.weight));
            }
        }
        if !total.error_estimate.is_finite() {
            return Err(Error::non_convergence(
                "reflected-phase integral has no finite tail bound",
                total.value,
                total.error_estimate,
            ));
        }
        Ok(total)
    }

    fn tail_piece<G: Fn(f64) -> f64>(
        &self,
        g: G,
        beta: f64,
        kind: Trig,
        hint: DecayHint,
        split: f64,
        cfg: &QuadratureConfig,
    ) -> Result<IntegralResult> {
        if beta == 0.0 {
            return match kind {
                Trig::Sin => Ok(IntegralResult::zero()),
                Trig::Cos => integrate_to_infinity(g, split, cfg),
            };
        }
        let mut local = *cfg;
        if hint.power < cfg.tail_exponent_floor && cfg.k_max_override.is_none() {
            // No trusted analytic cutoff: let the panel budget be the limit.
            local.k_max_override = Some(split + cfg.max_subdivisions as f64 * PI / beta.abs());
        }
        integrate_oscillatory_from(g, split, beta, kind, Some(hint), &local)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{DrudeParams, PerfectMirror};

    #[test]
    fn mirror_frullani_integral() {
        // ∫_0^∞ (cos ak - cos bk)/k dk = ln(b/a); with R = -1 the Re parts are -cos.
        let pi = PhaseIntegral {
            refl: &PerfectMirror,
            terms: vec![PhaseTerm::new(-1.0, 1.0, Part::Re), PhaseTerm::new(1.0, 3.0, Part::Re)],
            envelope: Envelope::InverseK,
            lower: 0.0,
            log_low: false,
        };
        let res = pi.evaluate(None, &QuadratureConfig::default()).unwrap();
        assert!((res.value - 3.0_f64.ln()).abs() < 1e-8, "{}", res.value);
    }

    #[test]
    fn transparent_medium_gives_zero() {
        let vac = DrudeParams::new(0.0, 1.0).unwrap();
        let pi = PhaseIntegral {
            refl: &vac,
            terms: vec![PhaseTerm::new(1.0, 1.0, Part::Re)],
            envelope: Envelope::Unit,
            lower: 0.0,
            log_low: false,
        };
        assert_eq!(pi.evaluate(None, &QuadratureConfig::default()).unwrap().value, 0.0);
    }
}
