//! Numerical integration engine.
//!
//! Everything here is deterministic: node placement depends only on the
//! integrand, the limits and the [`QuadratureConfig`], so repeated runs give
//! bit-identical results.

mod epsilon;
mod kronrod;
mod oscillatory;
mod pv;

pub use epsilon::EpsilonTable;
pub use kronrod::{integrate, integrate_panels, integrate_to_infinity};
pub use oscillatory::{integrate_gaussian_damped, integrate_oscillatory, integrate_oscillatory_from};
pub use pv::principal_value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on bisections in adaptive rules and on half-period
    /// panels in oscillatory sums.
    pub max_subdivisions: usize,
    /// Smallest algebraic decay power for which the analytic tail cutoff is
    /// trusted. Integrands decaying more slowly need `k_max_override`.
    pub tail_exponent_floor: f64,
    pub k_max_override: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 1000,
            tail_exponent_floor: 3.0,
            k_max_override: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 16 {
            return Err(Error::Config(format!(
                "max_subdivisions must be at least 16, got {}",
                self.max_subdivisions
            )));
        }
        if !self.tail_exponent_floor.is_finite() {
            return Err(Error::Config("tail_exponent_floor must be finite".into()));
        }
        if let Some(k) = self.k_max_override {
            if !(k > 0.0) {
                return Err(Error::Config(format!("k_max_override must be positive, got {k}")));
            }
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_k_max(mut self, k_max: Option<f64>) -> Self {
        self.k_max_override = k_max;
        self
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Largest abscissa actually integrated to; `f64::INFINITY` when the
    /// whole half-line was covered (mapping or extrapolation).
    pub k_max_used: f64,
    pub subdivisions_used: usize,
}

impl IntegralResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            error_estimate: 0.0,
            k_max_used: 0.0,
            subdivisions_used: 0,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }

    /// Sum of two independent integrals; errors add.
    pub fn combine(self, other: IntegralResult) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            k_max_used: self.k_max_used.max(other.k_max_used),
            subdivisions_used: self.subdivisions_used + other.subdivisions_used,
        }
    }
}

/// Oscillatory weight of a Fourier-type integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Cos => x.cos(),
            Trig::Sin => x.sin(),
        }
    }
}

/// Asymptotic envelope `|g(k)| ≈ coefficient / k^power` for large `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayHint {
    pub coefficient: f64,
    pub power: f64,
}

impl DecayHint {
    pub fn new(coefficient: f64, power: f64) -> Self {
        Self { coefficient, power }
    }

    /// `|c| ∫_k^∞ t^{-p} dt`; infinite for `p <= 1`.
    pub fn tail_bound(&self, k: f64) -> f64 {
        if self.power <= 1.0 {
            return f64::INFINITY;
        }
        self.coefficient.abs() * k.powf(1.0 - self.power) / (self.power - 1.0)
    }

    /// Smallest `k` at which [`DecayHint::tail_bound`] drops to `tolerance`.
    pub fn cutoff(&self, tolerance: f64) -> f64 {
        if self.coefficient == 0.0 {
            return 0.0;
        }
        if self.power <= 1.0 {
            return f64::INFINITY;
        }
        let p = self.power - 1.0;
        (self.coefficient.abs() / (p * tolerance)).powf(1.0 / p)
    }
}
