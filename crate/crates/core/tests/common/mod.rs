#![allow(dead_code)]

use std::f64::consts::{E, FRAC_PI_2, PI};

use mirror_qbm::quadrature::{
    integrate, integrate_gaussian_damped, integrate_oscillatory, integrate_to_infinity, principal_value, DecayHint,
    IntegralResult, QuadratureConfig, Trig,
};
use mirror_qbm::Result;

pub struct Case {
    pub name: &'static str,
    pub exact: f64,
    pub result: Result<IntegralResult>,
}

impl Case {
    pub fn honest(&self) -> bool {
        match &self.result {
            Ok(r) => (r.value - self.exact).abs() <= 5.0 * r.error_estimate,
            Err(_) => false,
        }
    }
}

/// Ten integrals with closed forms, one or more for every engine entry point.
pub fn honesty_suite() -> Vec<Case> {
    let cfg = QuadratureConfig::default();
    let floor2 = QuadratureConfig {
        tail_exponent_floor: 2.0,
        ..cfg
    };
    vec![
        Case {
            name: "x^2 on [0,1]",
            exact: 1.0 / 3.0,
            result: integrate(|x| x * x, 0.0, 1.0, &cfg),
        },
        Case {
            name: "sqrt(x) on [0,1]",
            exact: 2.0 / 3.0,
            result: integrate(f64::sqrt, 0.0, 1.0, &cfg),
        },
        Case {
            name: "exp(-x) on [0,inf)",
            exact: 1.0,
            result: integrate_to_infinity(|x| (-x).exp(), 0.0, &cfg),
        },
        Case {
            name: "1/(1+x^2) on [0,inf)",
            exact: FRAC_PI_2,
            result: integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, &cfg),
        },
        Case {
            name: "cos(k)/(1+k^2)",
            exact: FRAC_PI_2 / E,
            result: integrate_oscillatory(
                |k| 1.0 / (1.0 + k * k),
                1.0,
                Trig::Cos,
                Some(DecayHint::new(1.0, 2.0)),
                &floor2,
            ),
        },
        Case {
            name: "sin(k)/k",
            exact: FRAC_PI_2,
            result: integrate_oscillatory(
                |k| if k == 0.0 { 1.0 } else { 1.0 / k },
                1.0,
                Trig::Sin,
                None,
                &cfg.with_k_max(Some(1e7)),
            ),
        },
        Case {
            name: "sin(k)/(k(1+k^2))",
            exact: FRAC_PI_2 * (1.0 - 1.0 / E),
            result: integrate_oscillatory(
                |k| if k == 0.0 { 1.0 } else { 1.0 / (k * (1.0 + k * k)) },
                1.0,
                Trig::Sin,
                Some(DecayHint::new(1.0, 3.0)),
                &cfg,
            ),
        },
        Case {
            name: "exp(-k^2/2) cos(k)",
            exact: (PI / 2.0).sqrt() * (-0.5_f64).exp(),
            result: integrate_gaussian_damped(f64::cos, 1.0, 1.0, 1.0, &cfg),
        },
        Case {
            name: "PV w/(w-1) on [0,2]",
            exact: 2.0,
            result: principal_value(|w| w / (w - 1.0), 1.0, 0.0, 2.0, &cfg),
        },
        Case {
            name: "PV 1/((s^2-1)(1+s^2)) on [0,inf)",
            exact: -PI / 4.0,
            result: principal_value(|s| 1.0 / ((s * s - 1.0) * (1.0 + s * s)), 1.0, 0.0, f64::INFINITY, &cfg),
        },
    ]
}

/// Cosine integral `Ci(z)` for `0 < z < 4` by its power series.
pub fn cosine_integral(z: f64) -> f64 {
    let mut sum = 0.577_215_664_901_532_9 + z.ln();
    let mut term = 1.0;
    for n in 1..40 {
        term *= -z * z / ((2 * n - 1) as f64 * (2 * n) as f64);
        sum += term / (2 * n) as f64;
    }
    sum
}

/// Normalised Gaussian of unit width.
pub fn unit_gaussian(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}
