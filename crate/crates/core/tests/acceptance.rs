//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`). The process exits with
//! status 0 so that the workspace test run reports the verdicts without
//! aborting; set `ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero exit.

mod common;

use std::f64::consts::{LN_10, PI};
use std::time::Instant;

use mirror_qbm::dispersion::{
    dirichlet_dispersion, locate_valley, oscillation_detector, switched_dispersion, uniform_grid, velocity_dispersion,
    ProbeConfig, SwitchingSpec,
};
use mirror_qbm::medium::{f_omega, kramers_kronig_residual, reflection};
use mirror_qbm::propagator::{commutator_residual, wightman_ren, IrCutoff, SpacetimePair};
use mirror_qbm::scattering::{incident, pulse_delay, reflected_component, PulseSpec};
use mirror_qbm::{DrudeParams, QuadratureConfig, Result};

type Verdict = Result<(bool, String)>;

fn drude(sigma0: f64, b: f64) -> DrudeParams {
    DrudeParams::new(sigma0, b).expect("valid medium")
}

fn c1_dirichlet_closed_form() -> Verdict {
    let x = 1.0;
    let mut worst = 0.0_f64;
    for tau in [0.0, x, 2.0 * 2f64.sqrt() * x, 3.0 * x] {
        let v = dirichlet_dispersion(tau, x, 1.0)?;
        let oracle = (1.0 - tau * tau / (4.0 * x * x)).abs().ln() / (2.0 * PI);
        worst = worst.max((v - oracle).abs());
    }
    let at_zero = dirichlet_dispersion(0.0, x, 1.0)?;
    let at_root = dirichlet_dispersion(2.0 * 2f64.sqrt() * x, x, 1.0)?;
    let ok = worst <= 4.0 * f64::EPSILON && at_zero == 0.0 && at_root.abs() <= 4.0 * f64::EPSILON;
    Ok((
        ok,
        format!("max deviation {worst:.1e}, v(0) = {at_zero:e}, v(2√2x) = {at_root:.1e}"),
    ))
}

fn c2_switched_closed_form() -> Verdict {
    let x = 1.0;
    let tiny = SwitchingSpec::new(1e-6 * x)?;
    let mut worst = 0.0_f64;
    for tau in [0.5 * x, 1.5 * x, 3.0 * x] {
        let s = switched_dispersion(tau, x, tiny, 1.0)?;
        let d = dirichlet_dispersion(tau, x, 1.0)?;
        worst = worst.max(((s - d) / d).abs());
    }
    let mut finite = true;
    let mut at_two = Vec::new();
    for ts in [0.05 * x, 0.2 * x] {
        let v = switched_dispersion(2.0 * x, x, SwitchingSpec::new(ts)?, 1.0)?;
        finite &= v.is_finite();
        at_two.push(v);
    }
    Ok((
        worst < 1e-4 && finite,
        format!(
            "max relative deviation {worst:.1e}; v(2x) = {:.4}, {:.4}",
            at_two[0], at_two[1]
        ),
    ))
}

fn c3_dirichlet_convergence(cfg: &QuadratureConfig) -> Verdict {
    let x = 1.0;
    let taus: Vec<f64> = uniform_grid(0.0, 1.8 * x, 181)?
        .into_iter()
        .filter(|&t| t > 0.0)
        .collect();
    let probe = ProbeConfig::new(1.0, x, taus.clone())?;
    let mut sups = Vec::new();
    for sx in [1e2, 1e4, 1e6] {
        let values = velocity_dispersion(&probe, &drude(sx / x, 1e-3 * x), cfg)?;
        let sup = taus
            .iter()
            .zip(&values)
            .map(|(&t, &v)| {
                let d = dirichlet_dispersion(t, x, 1.0).expect("regular point");
                ((v - d) / d).abs()
            })
            .fold(0.0_f64, f64::max);
        sups.push(sup);
    }
    let ok = sups[2] < 0.01 && sups[0] > sups[1] && sups[1] > sups[2];
    Ok((
        ok,
        format!(
            "sup relative deviation {:.3e} → {:.3e} → {:.3e}",
            sups[0], sups[1], sups[2]
        ),
    ))
}

fn c4_valley_displacement(cfg: &QuadratureConfig) -> Verdict {
    let x = 1.0;
    let taus = uniform_grid(0.0, 6.0 * x, 600)?;
    let probe = ProbeConfig::new(1.0, x, taus.clone())?;
    let mut ok = true;
    let mut notes = Vec::new();
    for sx in [1.0, 10.0, 100.0] {
        let m = drude(sx / x, x);
        let values = velocity_dispersion(&probe, &m, cfg)?;
        let finite = values.iter().all(|v| v.is_finite());
        let curve: Vec<(f64, f64)> = taus.iter().copied().zip(values).collect();
        let (tau_min, _) = locate_valley(&curve, x, &m, cfg)?;
        ok &= finite && tau_min > 2.0 * x + 1e-2 * x;
        notes.push(format!("σ0x={sx}: τ_min={tau_min:.4}x"));
    }
    Ok((ok, notes.join(", ")))
}

fn c5_oscillations(cfg: &QuadratureConfig) -> Verdict {
    let x = 1.0;
    let m = drude(10.0 / x, x);
    let period = 2.0 * PI / mirror_qbm::medium::effective_mass(&m);
    let taus: Vec<f64> = uniform_grid(2.0 * x, 8.0 * x, 601)?
        .into_iter()
        .filter(|&t| t > 2.0 * x)
        .collect();
    let probe = ProbeConfig::new(1.0, x, taus.clone())?;
    let values = velocity_dispersion(&probe, &m, cfg)?;
    let curve: Vec<(f64, f64)> = taus.iter().copied().zip(values).collect();
    let drude_turns = oscillation_detector(&curve, 2.0 * x, Some(period))?;
    let mirror: Vec<(f64, f64)> = taus
        .iter()
        .map(|&t| Ok((t, dirichlet_dispersion(t, x, 1.0)?)))
        .collect::<Result<_>>()?;
    let mirror_turns = oscillation_detector(&mirror, 2.0 * x, Some(period))?;
    Ok((
        drude_turns >= 2 && mirror_turns == 0,
        format!("first-difference sign changes: Drude {drude_turns} (need ≥ 2), mirror {mirror_turns}"),
    ))
}

fn c6_reflection_asymptote() -> Verdict {
    let b = 1.0;
    let mut worst = [0.0_f64; 2];
    for sb in [0.1, 1.0, 10.0] {
        let m = drude(sb / b, b);
        for (slot, wb) in [(0, 1e2), (1, 1e3)] {
            let w = wb / b;
            let r = reflection(w, &m)?;
            worst[slot] = worst[slot].max((r.re * 4.0 * b * w * w / m.sigma0() - 1.0).abs());
        }
    }
    Ok((
        worst[0] < 0.05 && worst[1] < 0.005,
        format!("max deviation {:.2e} at ωb=100, {:.2e} at ωb=1000", worst[0], worst[1]),
    ))
}

fn c7_commutator(cfg: &QuadratureConfig) -> Verdict {
    let b = 1.0;
    let mut worst = 0.0_f64;
    for sb in [0.1, 1.0, 10.0] {
        for xb in [0.5, 2.0, 10.0] {
            worst = worst.max(commutator_residual(xb * b, &drude(sb / b, b), cfg)?);
        }
    }
    Ok((worst < 1e-6, format!("max residual {worst:.2e}")))
}

fn c8_kramers_kronig(cfg: &QuadratureConfig) -> Verdict {
    let b = 1.0;
    let grid = [0.1 / b, 1.0 / b, 10.0 / b];
    let mut worst = 0.0_f64;
    let mut closed_form = 0.0_f64;
    for sb in [0.1, 1.0, 10.0] {
        let m = drude(sb / b, b);
        let residuals = kramers_kronig_residual(&grid, &m, cfg)?;
        for (&w, r) in grid.iter().zip(residuals) {
            let f = f_omega(w, &m)?;
            let s0 = m.sigma0();
            let re = -s0 * b / (1.0 + b * b * w * w);
            let im = s0 / (w * (1.0 + b * b * w * w));
            closed_form = closed_form.max((f.re - re).abs().max((f.im - im).abs()) / f.norm());
            worst = worst.max(r / f.norm());
        }
    }
    Ok((
        worst < 1e-6 && closed_form < 1e-14,
        format!("max residual/|f| {worst:.2e}; rationalized form deviation {closed_form:.1e}"),
    ))
}

fn c9_pulse(cfg: &QuadratureConfig) -> Verdict {
    let ell = 1.0;
    let pulse = PulseSpec::gaussian(10.0 * ell, ell)?;
    let peak = pulse.peak();
    let window: Vec<f64> = (0..=240).map(|i| 7.0 * ell + 6.0 * ell * i as f64 / 240.0).collect();

    let vacuum = drude(0.0, ell);
    let mut dev_a = 0.0_f64;
    for &t in &window {
        for x in [0.01 * ell, 1.0 * ell, 5.0 * ell] {
            let r = reflected_component(&pulse, t, x, &vacuum, cfg)?;
            dev_a = dev_a.max(r.value.abs());
        }
    }
    let ok_a = dev_a <= 1e-12;

    let mirror = drude(1e8 / ell, ell);
    let mut dev_b = 0.0_f64;
    let mut wall = 0.0_f64;
    for &t in &window {
        for x in [0.01 * ell, 0.5 * ell, 2.0 * ell] {
            let phi = incident(&pulse, t, x) + reflected_component(&pulse, t, x, &mirror, cfg)?.value;
            let image = common::unit_gaussian((t + x - 10.0 * ell) / ell) / ell
                - common::unit_gaussian((t - x - 10.0 * ell) / ell) / ell;
            dev_b = dev_b.max((phi - image).abs() / peak);
            if x == 0.01 * ell {
                wall = wall.max(phi.abs() / peak);
            }
        }
    }
    let ok_b = dev_b < 1e-3 && wall < 1e-2;

    let mut delays = Vec::new();
    for s in [1e2, 1e3, 1e4] {
        delays.push(pulse_delay(
            &pulse,
            &drude(s / ell, ell),
            10.0 * ell,
            (14.0 * ell, 26.0 * ell),
            cfg,
        )?);
    }
    let ok_c = delays[0] > 0.0 && delays[0] > delays[1] && delays[1] > delays[2];

    Ok((
        ok_a && ok_b && ok_c,
        format!(
            "(a) {} max |φ-φ0| {dev_a:.1e}; (b) {} image deviation {dev_b:.1e}/peak, wall |φ(x=0.01ℓ)| {wall:.4}/peak (need < 0.01); \
             (c) {} delays {:.4}ℓ, {:.4}ℓ, {:.4}ℓ",
            verdict(ok_a),
            verdict(ok_b),
            verdict(ok_c),
            delays[0],
            delays[1],
            delays[2]
        ),
    ))
}

fn c10_ir_scaling(cfg: &QuadratureConfig) -> Verdict {
    let m = drude(1.0, 1.0);
    let pair = SpacetimePair::new(0.5, 1.0, 0.0, 1.5);
    let values: Vec<f64> = [1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&k| wightman_ren(&pair, &m, IrCutoff::new(k)?, cfg).map(|w| w.re))
        .collect::<Result<_>>()?;
    let expected = -LN_10 / (2.0 * PI);
    let steps = [values[1] - values[0], values[2] - values[1]];
    let worst = steps
        .iter()
        .map(|s| ((s - expected) / expected).abs())
        .fold(0.0_f64, f64::max);
    Ok((
        worst < 0.05,
        format!(
            "steps {:.6}, {:.6} vs {expected:.6} (max relative deviation {worst:.1e})",
            steps[0], steps[1]
        ),
    ))
}

fn c11_quadrature_honesty() -> Verdict {
    let suite = common::honesty_suite();
    let failures: Vec<&str> = suite.iter().filter(|c| !c.honest()).map(|c| c.name).collect();
    let ratio = suite
        .iter()
        .filter_map(|c| {
            c.result
                .as_ref()
                .ok()
                .map(|r| (r.value - c.exact).abs() / r.error_estimate.max(f64::MIN_POSITIVE))
        })
        .fold(0.0_f64, f64::max);
    Ok((
        failures.is_empty(),
        format!(
            "{}/{} honest, worst |err|/estimate {ratio:.2}{}",
            suite.len() - failures.len(),
            suite.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    ))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() {
    let cfg = QuadratureConfig::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("perfect-mirror closed form", Box::new(c1_dirichlet_closed_form)),
        ("switched closed form", Box::new(c2_switched_closed_form)),
        (
            "perfect-mirror limit of the numerical dispersion",
            Box::new(move || c3_dirichlet_convergence(&cfg)),
        ),
        (
            "finite dispersion, valley after 2x",
            Box::new(move || c4_valley_displacement(&cfg)),
        ),
        ("oscillations after 2x", Box::new(move || c5_oscillations(&cfg))),
        ("high-frequency reflection asymptote", Box::new(c6_reflection_asymptote)),
        ("commutator vanishing", Box::new(move || c7_commutator(&cfg))),
        ("Kramers-Kronig consistency", Box::new(move || c8_kramers_kronig(&cfg))),
        ("pulse scattering", Box::new(move || c9_pulse(&cfg))),
        (
            "infrared scaling of the two-point function",
            Box::new(move || c10_ir_scaling(&cfg)),
        ),
        ("quadrature error honesty", Box::new(c11_quadrature_honesty)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2}: {name} - {detail} [{:.2?}]",
            verdict(ok),
            i + 1,
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
