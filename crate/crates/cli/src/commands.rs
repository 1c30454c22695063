//! The table-producing commands. Grid points run on the rayon pool and are
//! gathered back in grid order; a failing point leaves missing cells and
//! is reported in the metadata rather than aborting the table.

use std::f64::consts::PI;

use mirror_qbm::dispersion::{dirichlet_dispersion, switched_dispersion, velocity_dispersion_at, SwitchingSpec};
use mirror_qbm::medium::{f_omega, reflection, refractive_index, transmission};
use mirror_qbm::scattering::{incident, pulse_delay, reflected_component};
use mirror_qbm::{DrudeParams, Error, IntegralResult, PerfectMirror, Reflectivity};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::table::CurveTable;
use crate::{CliError, Outcome};

/// Version string recorded in every table.
pub const TOOL_VERSION: &str = concat!("mirror-qbm ", env!("CARGO_PKG_VERSION"));

/// Metadata header shared by every command.
pub fn start_table(cfg: &RunConfig, labels: Vec<String>) -> CurveTable {
    let mut table = CurveTable::new(labels);
    table.push_meta("tool", TOOL_VERSION);
    for (k, v) in cfg.echo() {
        table.push_meta(&k, v);
    }
    table
}

/// Records the completion status and wraps up the outcome.
pub fn finish(mut table: CurveTable, failures: Vec<Error>, failed_checks: usize) -> Outcome {
    if failures.is_empty() {
        table.push_meta("status", "complete");
    } else {
        table.push_meta("status", "incomplete");
        table.push_meta("failed-points", failures.len());
        table.push_meta("first-failure", &failures[0]);
    }
    Outcome {
        table,
        failures,
        failed_checks,
    }
}

/// Splits per-point results into (value, error) cells, collecting failures.
fn cells(results: Vec<mirror_qbm::Result<IntegralResult>>, failures: &mut Vec<Error>) -> Vec<(f64, f64)> {
    results
        .into_iter()
        .map(|r| match r {
            Ok(r) => (r.value, r.error_estimate),
            Err(e) => {
                failures.push(e);
                (f64::NAN, f64::NAN)
            }
        })
        .collect()
}

fn media(cfg: &RunConfig) -> Result<Vec<DrudeParams>, CliError> {
    cfg.sigma0.iter().map(|&s| cfg.drude(s)).collect()
}

/// `σ0·L` rendered for column labels.
fn scaled(v: f64, unit: f64) -> String {
    format!("{}", v * unit)
}

/// Mirror closed form with the singular point as a missing value.
fn mirror_value(value: mirror_qbm::Result<f64>, failures: &mut Vec<Error>) -> f64 {
    match value {
        Ok(v) => v,
        Err(Error::Singular(_)) => f64::NAN,
        Err(e) => {
            failures.push(e);
            f64::NAN
        }
    }
}

pub fn run_medium_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let labels = [
        "sigma0*b", "omega*b", "re f", "im f", "re n", "im n", "re R", "im R", "re T", "im T", "|R|",
    ];
    let mut table = start_table(cfg, labels.iter().map(|s| s.to_string()).collect());
    let omegas = cfg.omega_points()?;
    let mut failures = Vec::new();
    for p in media(cfg)? {
        for &wb in &omegas {
            let omega = wb / cfg.b;
            let row = (|| -> mirror_qbm::Result<Vec<f64>> {
                let f = f_omega(omega, &p)?;
                let n = refractive_index(omega, &p)?;
                let r = reflection(omega, &p)?;
                let t = transmission(omega, &p)?;
                Ok(vec![
                    p.sigma0() * cfg.b,
                    omega * cfg.b,
                    f.re,
                    f.im,
                    n.re,
                    n.im,
                    r.re,
                    r.im,
                    t.re,
                    t.im,
                    r.norm(),
                ])
            })();
            match row {
                Ok(row) => table.push_row(row),
                Err(err) => {
                    let mut row = vec![f64::NAN; labels.len()];
                    row[0] = p.sigma0() * cfg.b;
                    row[1] = omega * cfg.b;
                    table.push_row(row);
                    failures.push(err.at(format!("omega = {omega}")));
                }
            }
        }
    }
    table.push_meta("units", "frequencies in 1/b; responses dimensionless");
    Ok(finish(table, failures, 0))
}

/// Dispersion at every `(medium, τ)` pair, in grid order.
fn dispersion_grid(cfg: &RunConfig, media: &[DrudeParams], taus: &[f64]) -> Vec<mirror_qbm::Result<IntegralResult>> {
    let jobs: Vec<(usize, f64)> = (0..media.len())
        .flat_map(|m| taus.iter().map(move |&t| (m, t)))
        .collect();
    jobs.par_iter()
        .map(|&(m, tau)| {
            velocity_dispersion_at(tau, cfg.x, &media[m], &cfg.quad).map_err(|e| {
                e.at(format!(
                    "tau = {tau}, sigma0 = {}, b = {}, x = {}",
                    media[m].sigma0(),
                    cfg.b,
                    cfg.x
                ))
            })
        })
        .collect()
}

pub fn run_dispersion_figure(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let probe = cfg.probe()?;
    let taus = &probe.tau_grid;
    let media = media(cfg)?;
    let mut labels = vec!["tau/x".to_string()];
    for p in &media {
        let s = scaled(p.sigma0(), cfg.x);
        labels.push(format!("v2*m2/g2 [sigma0*x={s}]"));
        labels.push(format!("err [sigma0*x={s}]"));
    }
    labels.push("v2*m2/g2 [dirichlet]".into());
    let mut table = start_table(cfg, labels);
    table.push_meta(
        "units",
        "tau in x; dispersion as <v^2> m^2/g^2; err = per-point quadrature error estimate",
    );

    let mut failures = Vec::new();
    let values = cells(dispersion_grid(cfg, &media, taus), &mut failures);
    for (i, &tau) in taus.iter().enumerate() {
        let mut row = vec![tau / cfg.x];
        for m in 0..media.len() {
            let (v, e) = values[m * taus.len() + i];
            row.extend([v, e]);
        }
        row.push(mirror_value(dirichlet_dispersion(tau, cfg.x, 1.0), &mut failures));
        table.push_row(row);
    }
    Ok(finish(table, failures, 0))
}

pub fn run_switched_figure(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let probe = cfg.probe()?;
    let taus = &probe.tau_grid;
    let media = media(cfg)?;
    let switches = cfg
        .tau_s
        .iter()
        .map(|&ts| SwitchingSpec::new(ts))
        .collect::<mirror_qbm::Result<Vec<_>>>()?;
    let mut labels = vec!["tau/x".to_string()];
    for sw in &switches {
        labels.push(format!("v2*m2/g2 [tau_s/x={}]", scaled(sw.tau_s(), 1.0 / cfg.x)));
    }
    labels.push("v2*m2/g2 [sudden]".into());
    for p in &media {
        let s = scaled(p.sigma0(), cfg.x);
        labels.push(format!("v2*m2/g2 [sigma0*x={s}]"));
        labels.push(format!("err [sigma0*x={s}]"));
    }
    let mut table = start_table(cfg, labels);
    table.push_meta(
        "units",
        "tau and tau_s in x; dispersion as <v^2> m^2/g^2; err = per-point quadrature error estimate",
    );

    let mut failures = Vec::new();
    let values = cells(dispersion_grid(cfg, &media, taus), &mut failures);
    for (i, &tau) in taus.iter().enumerate() {
        let mut row = vec![tau / cfg.x];
        for &sw in &switches {
            row.push(mirror_value(switched_dispersion(tau, cfg.x, sw, 1.0), &mut failures));
        }
        row.push(mirror_value(
            switched_dispersion(tau, cfg.x, SwitchingSpec::sudden(), 1.0),
            &mut failures,
        ));
        for m in 0..media.len() {
            let (v, e) = values[m * taus.len() + i];
            row.extend([v, e]);
        }
        table.push_row(row);
    }
    Ok(finish(table, failures, 0))
}

pub fn run_pulse_figure(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pulse = cfg.pulse()?;
    let ts = cfg.t.points()?;
    let xs = cfg.x_grid.points()?;
    let media = media(cfg)?;
    let ell = cfg.ell;
    let norm = (2.0 * PI).sqrt() * ell;

    let mut labels = vec![
        "t/ell".to_string(),
        "x/ell".to_string(),
        "phi*sqrt(2pi)*ell [free]".to_string(),
    ];
    for p in &media {
        let s = scaled(p.sigma0(), ell);
        labels.push(format!("phi*sqrt(2pi)*ell [sigma0*ell={s}]"));
        labels.push(format!("err [sigma0*ell={s}]"));
    }
    labels.push("phi*sqrt(2pi)*ell [mirror]".into());
    labels.push("err [mirror]".into());
    let mut table = start_table(cfg, labels);
    table.push_meta(
        "units",
        "t, x in ell; field scaled by sqrt(2 pi) ell so the initial peak is 1",
    );

    // Media first, the perfect mirror last.
    let mirror = PerfectMirror;
    let mut reflectors: Vec<&(dyn Reflectivity + Sync)> =
        media.iter().map(|p| p as &(dyn Reflectivity + Sync)).collect();
    reflectors.push(&mirror);
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let jobs: Vec<(usize, f64, f64)> = (0..reflectors.len())
        .flat_map(|m| points.iter().map(move |&(t, x)| (m, t, x)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(m, t, x)| {
            reflected_component(&pulse, t, x, reflectors[m], &cfg.quad).map_err(|e| e.at(format!("t = {t}, x = {x}")))
        })
        .collect();
    let mut failures = Vec::new();
    let values = cells(results, &mut failures);
    for (i, &(t, x)) in points.iter().enumerate() {
        let free = incident(&pulse, t, x);
        let mut row = vec![t / ell, x / ell, norm * free];
        for m in 0..reflectors.len() {
            let (v, e) = values[m * points.len() + i];
            row.extend([norm * (free + v), norm * e]);
        }
        table.push_row(row);
    }
    Ok(finish(table, failures, 0))
}

/// Arrival-time search half-width around the mirror echo, in units of ℓ.
const DELAY_WINDOW: f64 = 6.0;

pub fn run_delay_scan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pulse = cfg.pulse()?;
    let media = media(cfg)?;
    let ell = cfg.ell;
    let echo = cfg.x0 + cfg.x;
    let window = (echo - DELAY_WINDOW * ell, echo + DELAY_WINDOW * ell);
    let mut table = start_table(cfg, vec!["sigma0*ell".into(), "b/ell".into(), "delay/ell".into()]);
    table.push_meta(
        "units",
        "delay of the reflected peak at x relative to the perfect mirror, in ell",
    );
    table.push_meta("t-window", format!("{:?},{:?}", window.0, window.1));

    let results: Vec<_> = media
        .par_iter()
        .map(|p| pulse_delay(&pulse, p, cfg.x, window, &cfg.quad).map_err(|e| e.at(format!("sigma0 = {}", p.sigma0()))))
        .collect();
    let mut failures = Vec::new();
    for (p, r) in media.iter().zip(results) {
        let delay = r.unwrap_or_else(|e| {
            failures.push(e);
            f64::NAN
        });
        table.push_row(vec![p.sigma0() * ell, cfg.b / ell, delay / ell]);
    }
    Ok(finish(table, failures, 0))
}
