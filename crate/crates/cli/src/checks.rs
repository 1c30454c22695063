//! The invariant suite behind `mirror-qbm check`. Every row carries the
//! measured value and its bound; a row passes when `measured <= bound`.
//! For the vacuum (`σ0 = 0`) every reflection-dependent row is a trivial
//! pass.

use std::f64::consts::PI;

use mirror_qbm::dispersion::{dirichlet_dispersion, velocity_dispersion_at};
use mirror_qbm::medium::{
    f_omega, kramers_kronig_residual, permittivity, reflection, reflection_low_frequency_defect, refractive_index,
    transmission, Branch, BranchedMedium,
};
use mirror_qbm::propagator::commutator_residual;
use mirror_qbm::scattering::{reflected_component, PulseSpec};
use mirror_qbm::{DrudeParams, Reflectivity, Result};
use num_complex::Complex64;

use crate::commands::{finish, start_table};
use crate::config::RunConfig;
use crate::table::CurveTable;
use crate::{CliError, Outcome};

pub const LABELS: [&str; 4] = ["measured", "bound", "pass", "trivial"];

struct Row {
    name: String,
    measured: f64,
    bound: f64,
    trivial: bool,
    error: Option<String>,
}

impl Row {
    fn passed(&self) -> bool {
        self.trivial || self.measured <= self.bound
    }
}

fn row(name: String, bound: f64, trivial: bool, measure: impl FnOnce() -> Result<f64>) -> Row {
    if trivial {
        return Row {
            name,
            measured: 0.0,
            bound,
            trivial,
            error: None,
        };
    }
    let (measured, error) = match measure() {
        Ok(v) => (v, None),
        Err(e) => (f64::INFINITY, Some(e.to_string())),
    };
    Row {
        name,
        measured,
        bound,
        trivial,
        error,
    }
}

type Response = fn(f64, &DrudeParams) -> Result<Complex64>;

fn log_grid(b: f64) -> Vec<f64> {
    (0..=32).map(|i| 10f64.powf(-4.0 + 0.25 * i as f64) / b).collect()
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0_f64, |m, v| v.map(|v| m.max(v)))
}

fn medium_rows(cfg: &RunConfig, p: &DrudeParams) -> Vec<Row> {
    let b = p.b();
    let tag = format!("[sigma0*b={}]", p.sigma0() * b);
    let vac = p.is_vacuum();
    let grid = log_grid(b);
    let mut rows = Vec::new();

    rows.push(row(format!("reality X(-w) = conj X(w) {tag}"), 1e-12, false, || {
        let all: [Response; 5] = [f_omega, permittivity, refractive_index, reflection, transmission];
        max_of(grid.iter().flat_map(|&w| {
            all.iter().map(move |g| {
                let pos = g(w, p)?;
                Ok((g(-w, p)? - pos.conj()).norm() / pos.norm().max(1.0))
            })
        }))
    }));
    rows.push(row(format!("passivity max |R| {tag}"), 1.0 + 1e-12, vac, || {
        max_of(grid.iter().map(|&w| Ok(reflection(w, p)?.norm())))
    }));
    rows.push(row(format!("passivity -min Im n {tag}"), 0.0, vac, || {
        max_of(grid.iter().map(|&w| Ok(-refractive_index(w, p)?.im)))
    }));
    rows.push(row(
        format!("high-frequency limit |4b w^2 R/sigma0 - 1| {tag}"),
        5e-3,
        vac,
        || {
            let w = 1e3 * (p.sigma0() * b).sqrt().max(1.0) / b;
            Ok((reflection(w, p)? * 4.0 * b * w * w / p.sigma0() - 1.0).norm())
        },
    ));
    rows.push(row(
        format!("low-frequency limit ||R+1| sqrt(sigma0/w)/2 - 1| {tag}"),
        1e-2,
        vac,
        || {
            let w = 1e-6 * p.sigma0().min(1.0 / b);
            Ok((reflection_low_frequency_defect(w, p)?.norm() * (p.sigma0() / w).sqrt() / 2.0 - 1.0).abs())
        },
    ));
    rows.push(row(format!("Kramers-Kronig residual/|f| {tag}"), 1e-6, vac, || {
        let ws = [0.1 / b, 1.0 / b, 10.0 / b];
        let res = kramers_kronig_residual(&ws, p, &cfg.quad)?;
        max_of(ws.iter().zip(res).map(|(&w, r)| Ok(r / f_omega(w, p)?.norm())))
    }));
    let branch = if cfg.wrong_branch {
        Branch::Flipped
    } else {
        Branch::Physical
    };
    let medium = BranchedMedium { params: *p, branch };
    rows.push(row(format!("commutator residual {tag}"), 1e-6, vac, || {
        max_of([0.5, 2.0, 10.0].map(|d| commutator_residual(d * b, &medium, &cfg.quad).map(f64::abs)))
    }));
    rows.push(row(format!("causality of reflection {tag}"), 1e-9, vac, || {
        causality(cfg, p)
    }));
    rows
}

/// Largest reflected signal at `x = ℓ` before the earliest echo
/// (`t < x0 - 7ℓ`), relative to the initial peak.
fn causality(cfg: &RunConfig, p: &dyn Reflectivity) -> Result<f64> {
    let pulse = PulseSpec::gaussian(cfg.x0, cfg.ell)?;
    let ell = cfg.ell;
    let last = (cfg.x0 - 7.0 * ell).max(0.0);
    let norm = (2.0 * PI).sqrt() * ell;
    max_of((0..=8).map(|i| {
        let t = last * i as f64 / 8.0;
        Ok(norm * reflected_component(&pulse, t, ell, p, &cfg.quad)?.value.abs())
    }))
}

/// A near-ideal medium (`b = 10⁻³x`, `σ0 = 10⁶/x`) must reproduce the mirror
/// closed form below `τ = 2x`.
fn dirichlet_row(cfg: &RunConfig) -> Row {
    let x = cfg.x;
    row(
        "Dirichlet convergence max relative deviation".into(),
        1e-2,
        false,
        || {
            let p = DrudeParams::new(1e6 / x, 1e-3 * x)?;
            max_of([0.5, 1.0, 1.5].map(|s| {
                let tau = s * x;
                let exact = dirichlet_dispersion(tau, x, 1.0)?;
                let v = velocity_dispersion_at(tau, x, &p, &cfg.quad)?.value;
                Ok(((v - exact) / exact).abs())
            }))
        },
    )
}

pub fn run_check_suite(cfg: &RunConfig) -> std::result::Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for &s in &cfg.sigma0 {
        rows.extend(medium_rows(cfg, &cfg.drude(s)?));
    }
    rows.push(dirichlet_row(cfg));

    let base = start_table(cfg, Vec::new());
    let mut table = CurveTable::keyed("check", LABELS.iter().map(|s| s.to_string()).collect());
    table.meta = base.meta;
    if cfg.wrong_branch {
        table.push_meta("branch", "flipped");
    }
    let mut failed = 0;
    for (i, r) in rows.iter().enumerate() {
        if !r.passed() {
            failed += 1;
        }
        if let Some(e) = &r.error {
            table.push_meta(&format!("error-{i}"), format!("{}: {e}", r.name));
        }
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        table.push_keyed_row(
            r.name.clone(),
            vec![r.measured, r.bound, flag(r.passed()), flag(r.trivial)],
        );
    }
    table.push_meta("checks-failed", failed);
    Ok(finish(table, Vec::new(), failed))
}
