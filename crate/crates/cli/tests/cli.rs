use std::process::Command as Process;

use mirror_qbm::dispersion::{dirichlet_dispersion, switched_dispersion, SwitchingSpec};
use mirror_qbm_cli::{execute, Cli, CurveTable, Format, RunConfig};

use clap::Parser;

const BIN: &str = env!("CARGO_BIN_EXE_mirror-qbm");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn table(args: &[&str]) -> CurveTable {
    let cli = Cli::try_parse_from(std::iter::once("mirror-qbm").chain(args.iter().copied())).unwrap();
    let outcome = execute(&RunConfig::resolve(&cli).unwrap()).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    outcome.table
}

fn col(t: &CurveTable, label: &str) -> Vec<f64> {
    t.column(label)
        .unwrap_or_else(|| panic!("no column {label:?} in {:?}", t.labels))
}

const SMALL_DISPERSION: &[&str] = &["dispersion", "--tau-steps", "61"];

#[test]
fn identical_runs_are_byte_identical() {
    let (code, a, _) = run(&[SMALL_DISPERSION, &["--threads", "1"]].concat());
    assert_eq!(code, 0);
    let (_, b, _) = run(&[SMALL_DISPERSION, &["--threads", "4"]].concat());
    let (_, c, _) = run(SMALL_DISPERSION);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn tables_round_trip_exactly() {
    for format in ["csv", "json"] {
        let (code, text, _) = run(&[SMALL_DISPERSION, &["--format", format]].concat());
        assert_eq!(code, 0);
        let f: Format = format.parse().unwrap();
        let parsed = CurveTable::parse(&text, f).unwrap();
        assert_eq!(parsed.rows.len(), 61);
        assert_eq!(parsed.render(f), text);
    }
    let (_, csv, _) = run(SMALL_DISPERSION);
    let (_, json, _) = run(&[SMALL_DISPERSION, &["--format", "json"]].concat());
    let a = CurveTable::from_csv(&csv).unwrap();
    let b = CurveTable::from_json(&json).unwrap();
    assert_eq!(a.meta, b.meta);
    for (x, y) in a.rows.iter().flatten().zip(b.rows.iter().flatten()) {
        assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
    }
}

#[test]
fn metadata_echo_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "switched",
        "--sigma0",
        "3",
        "--tau-s",
        "0.1",
        "--tau-steps",
        "9",
        "--rel-tol",
        "1e-9",
    ];
    let (_, first, _) = run(&args);
    let echo: String = first
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, echo).unwrap();
    let (code, second, err) = run(&["switched", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(first, second);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "sigma0 = 5\nb = 2\ntau-steps = 5\nformat = json\n").unwrap();
    let path = cfg.to_str().unwrap();
    let t = table(&["dispersion", "--config", path, "--b", "0.5"]);
    assert_eq!(t.meta_value("b"), Some("0.5"));
    assert_eq!(t.meta_value("sigma0"), Some("5.0"));
    assert_eq!(t.rows.len(), 5);
    let (code, out, _) = run(&["dispersion", "--config", path, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# tool="));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("medium.json");
    let (code, stdout, _) = run(&["medium-table", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let t = CurveTable::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 61);
    assert!(col(&t, "|R|").iter().all(|&r| r < 1.0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check"]).0, 0);
    assert_eq!(run(&["check", "--wrong-branch"]).0, 1);
    assert_eq!(run(&["dispersion", "--b", "-1"]).0, 2);
    assert_eq!(run(&["dispersion", "--format", "xml"]).0, 2);
    assert_eq!(run(&["dispersion", "--config", "/nonexistent/run.cfg"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["--version"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "sigma_naught = 1\n").unwrap();
    assert_eq!(run(&["dispersion", "--config", cfg.to_str().unwrap()]).0, 2);

    // A starved panel budget cannot converge: partial table, exit 3.
    let (code, out, err) = run(&["dispersion", "--tau-steps", "7", "--max-subdivisions", "16"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("did not converge"));
    let t = CurveTable::from_csv(&out).unwrap();
    assert_eq!(t.meta_value("status"), Some("incomplete"));
    assert_eq!(t.rows.len(), 7);
    assert!(t.rows.iter().flatten().any(|v| v.is_nan()));
}

#[test]
fn dispersion_figure() {
    let t = table(SMALL_DISPERSION);
    let tau = col(&t, "tau/x");
    let dirichlet = col(&t, "v2*m2/g2 [dirichlet]");
    for (&s, &d) in tau.iter().zip(&dirichlet) {
        if s == 2.0 {
            assert!(d.is_nan());
        } else {
            assert!((d - dirichlet_dispersion(s, 1.0, 1.0).unwrap()).abs() <= 1e-12);
        }
    }
    for s in ["1", "10", "100"] {
        let v = col(&t, &format!("v2*m2/g2 [sigma0*x={s}]"));
        assert!(v.iter().all(|x| x.is_finite()));
        let i = v.iter().enumerate().fold(0, |b, (i, &x)| if x < v[b] { i } else { b });
        assert!(tau[i] > 2.0, "sigma0*x = {s}: minimum at {}", tau[i]);
    }
}

#[test]
fn doubling_rel_tol_stays_within_error_estimates() {
    let args = ["dispersion", "--tau-steps", "13"];
    let tight = table(&args);
    let loose = table(&[&args[..], &["--rel-tol", "2e-8"]].concat());
    for s in ["1", "10", "100"] {
        let (a, b) = (&format!("v2*m2/g2 [sigma0*x={s}]"), &format!("err [sigma0*x={s}]"));
        for i in 0..tight.rows.len() {
            let diff = (col(&tight, a)[i] - col(&loose, a)[i]).abs();
            assert!(
                diff <= col(&tight, b)[i] + col(&loose, b)[i],
                "sigma0*x = {s}, row {i}: {diff:e}"
            );
        }
    }
}

#[test]
fn switched_figure() {
    let t = table(&["switched", "--tau-s", "0,1e-6,0.05,0.2", "--tau-steps", "9"]);
    let tau = col(&t, "tau/x");
    let sudden = col(&t, "v2*m2/g2 [sudden]");
    let zero = col(&t, "v2*m2/g2 [tau_s/x=0]");
    let tiny = col(&t, "v2*m2/g2 [tau_s/x=0.000001]");
    for i in 0..tau.len() {
        assert!(zero[i].to_bits() == sudden[i].to_bits());
        if tau[i] == 1.5 {
            assert!(((tiny[i] - sudden[i]) / sudden[i]).abs() < 1e-4);
        }
        if tau[i] == 2.0 {
            assert!(sudden[i].is_nan());
            for s in ["0.05", "0.2"] {
                assert!(col(&t, &format!("v2*m2/g2 [tau_s/x={s}]"))[i].is_finite());
            }
        }
    }
    let drude = col(&t, "v2*m2/g2 [sigma0*x=10]");
    assert!(drude.iter().all(|v| v.is_finite()));
    let sw = SwitchingSpec::new(0.2).unwrap();
    assert_eq!(
        col(&t, "v2*m2/g2 [tau_s/x=0.2]")[3],
        switched_dispersion(tau[3], 1.0, sw, 1.0).unwrap()
    );
}

#[test]
fn pulse_figure() {
    let t = table(&[
        "pulse",
        "--t-steps",
        "3",
        "--t-max",
        "20",
        "--x-steps",
        "7",
        "--x-max",
        "12",
    ]);
    let (ts, xs) = (col(&t, "t/ell"), col(&t, "x/ell"));
    let free = col(&t, "phi*sqrt(2pi)*ell [free]");
    let mirror = col(&t, "phi*sqrt(2pi)*ell [mirror]");
    let strong = col(&t, "phi*sqrt(2pi)*ell [sigma0*ell=100000000]");
    let medium = col(&t, "phi*sqrt(2pi)*ell [sigma0*ell=100]");
    let g = |u: f64| (-0.5 * u * u).exp();
    for i in 0..ts.len() {
        let (s, x) = (ts[i], xs[i]);
        if s == 0.0 {
            assert!((medium[i] - g(x - 10.0)).abs() < 1e-10);
        }
        let image = g(s + x - 10.0) - g(s - x - 10.0);
        assert!((mirror[i] - image).abs() < 1e-10);
        assert!((strong[i] - image).abs() < 1e-3);
        assert!((free[i] - g(s + x - 10.0)).abs() < 1e-15);
    }
}

#[test]
fn delay_scan() {
    let t = table(&["delay-scan"]);
    let d = col(&t, "delay/ell");
    assert_eq!(d.len(), 3);
    assert!(d[0] > 0.0 && d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn check_suite() {
    let pass = |t: &CurveTable| col(t, "pass").iter().all(|&p| p == 1.0);
    let t = table(&["check"]);
    assert!(pass(&t));
    assert!(col(&t, "trivial").iter().all(|&p| p == 0.0));

    let vac = table(&["check", "--sigma0", "0"]);
    assert!(pass(&vac));
    for (key, row) in vac.keys.iter().zip(&vac.rows) {
        let reflection_dependent = !key.starts_with("reality") && !key.starts_with("Dirichlet");
        assert_eq!(row[3] == 1.0, reflection_dependent, "{key}");
    }

    let cli = Cli::try_parse_from(["mirror-qbm", "check", "--wrong-branch"]).unwrap();
    let outcome = execute(&RunConfig::resolve(&cli).unwrap()).unwrap();
    let t = &outcome.table;
    let failed: Vec<&String> = t
        .keys
        .iter()
        .zip(&t.rows)
        .filter(|(_, r)| r[2] == 0.0)
        .map(|(k, _)| k)
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("commutator"));
    assert_eq!(outcome.exit_code(), 1);
}
