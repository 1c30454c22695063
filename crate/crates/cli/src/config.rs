//! Flags, the key=value config file, and their resolution into a
//! [`RunConfig`]. Flags win over file entries; both win over the
//! command-specific defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use mirror_qbm::dispersion::{uniform_grid, ProbeConfig, SwitchingSpec};
use mirror_qbm::scattering::PulseSpec;
use mirror_qbm::{DrudeParams, QuadratureConfig};

use crate::table::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// f, n, R and T of the medium on a log-spaced frequency grid.
    MediumTable,
    /// Velocity dispersion against τ for each σ0, with the mirror closed form.
    Dispersion,
    /// Switched mirror closed forms for each τ_s, the sudden limit and one medium.
    Switched,
    /// Field snapshots of a Gaussian packet for each σ0 and the perfect mirror.
    Pulse,
    /// Reflected-peak delay relative to the mirror, one row per σ0.
    DelayScan,
    /// Invariant suite; exits 1 if any check fails.
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::MediumTable => "medium-table",
            Command::Dispersion => "dispersion",
            Command::Switched => "switched",
            Command::Pulse => "pulse",
            Command::DelayScan => "delay-scan",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "mirror-qbm",
    version,
    allow_negative_numbers = true,
    about = "Vacuum-induced velocity dispersion and pulse scattering near a Drude half-space"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// DC strength σ0 (inverse length); repeat or comma-separate for several media.
    #[arg(long, value_delimiter = ',')]
    pub sigma0: Vec<f64>,
    /// Relaxation length b.
    #[arg(long)]
    pub b: Option<f64>,
    /// Probe distance from the interface (dispersion) or probe point (pulse commands).
    #[arg(long)]
    pub x: Option<f64>,

    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_steps: Option<usize>,
    /// Switching timescale; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    pub tau_s: Vec<f64>,

    /// Pulse centre.
    #[arg(long)]
    pub x0: Option<f64>,
    /// Pulse width.
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub x_steps: Option<usize>,

    /// Frequency range for medium-table, in units of 1/b.
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub omega_steps: Option<usize>,

    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Fixed upper frequency cutoff for the spectral integrals.
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,

    /// Worker threads (default: hardware parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub format: Option<String>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat key=value file using the long flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Negative-control hook: evaluate the commutator check on the unphysical index root.
    #[arg(long, hide = true)]
    pub wrong_branch: bool,
}

/// Keys accepted in the config file.
const FILE_KEYS: &[&str] = &[
    "sigma0",
    "b",
    "x",
    "tau-min",
    "tau-max",
    "tau-steps",
    "tau-s",
    "x0",
    "ell",
    "t-min",
    "t-max",
    "t-steps",
    "x-min",
    "x-max",
    "x-steps",
    "omega-min",
    "omega-max",
    "omega-steps",
    "rel-tol",
    "abs-tol",
    "k-max",
    "max-subdivisions",
    "threads",
    "format",
    "output",
];

/// `lo`, `hi` and point count of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        Ok(uniform_grid(self.min, self.max, self.steps)?)
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub sigma0: Vec<f64>,
    pub b: f64,
    pub x: f64,
    pub tau: GridSpec,
    pub tau_s: Vec<f64>,
    pub x0: f64,
    pub ell: f64,
    pub t: GridSpec,
    pub x_grid: GridSpec,
    /// Frequency range in units of `1/b`, log-spaced.
    pub omega: GridSpec,
    pub quad: QuadratureConfig,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub wrong_branch: bool,
}

/// Output-only metadata keys, skipped so a table's echo can be reused as a
/// config file.
const ECHO_ONLY_KEYS: &[&str] = &[
    "tool",
    "command",
    "status",
    "units",
    "t-window",
    "failed-points",
    "first-failure",
    "checks-failed",
    "branch",
];

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if ECHO_ONLY_KEYS.contains(&key.as_str()) || key.starts_with("error-") {
            continue;
        }
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

struct Layer<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layer<'_> {
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("config key {key}: cannot parse {v:?}")))
            })
            .transpose()
    }

    fn list(&self, flag: &[f64], key: &str) -> Result<Option<Vec<f64>>, CliError> {
        if !flag.is_empty() {
            return Ok(Some(flag.to_vec()));
        }
        self.file
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| CliError::Config(format!("config key {key}: cannot parse {s:?}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

impl RunConfig {
    /// Resolves flags over an optional config file over defaults.
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        let l = Layer { file: &file };
        let cmd = cli.command;
        let pulse_cmd = matches!(cmd, Command::Pulse | Command::DelayScan);

        let ell = l.get(cli.ell, "ell")?.unwrap_or(1.0);
        let x0 = l.get(cli.x0, "x0")?.unwrap_or(10.0 * ell);
        // Dispersion commands measure lengths in x, pulse commands in ℓ.
        let x = l.get(cli.x, "x")?.unwrap_or(if pulse_cmd { x0 } else { 1.0 });
        let unit = if pulse_cmd { ell } else { x };
        let b = l.get(cli.b, "b")?.unwrap_or(unit);
        let default_sigma: Vec<f64> = match cmd {
            Command::MediumTable | Command::Check => vec![1.0 / b],
            Command::Dispersion => [1.0, 10.0, 100.0].iter().map(|s| s / x).collect(),
            Command::Switched => vec![10.0 / x],
            Command::Pulse => vec![100.0 / ell, 1e8 / ell],
            Command::DelayScan => [1e2, 1e3, 1e4].iter().map(|s| s / ell).collect(),
        };
        let sigma0 = l.list(&cli.sigma0, "sigma0")?.unwrap_or(default_sigma);
        let tau_max_default = if cmd == Command::Switched { 4.0 * x } else { 6.0 * x };
        let tau = GridSpec {
            min: l.get(cli.tau_min, "tau-min")?.unwrap_or(0.0),
            max: l.get(cli.tau_max, "tau-max")?.unwrap_or(tau_max_default),
            steps: l
                .get(cli.tau_steps, "tau-steps")?
                .unwrap_or(if cmd == Command::Switched { 401 } else { 601 }),
        };
        let tau_s = l.list(&cli.tau_s, "tau-s")?.unwrap_or_else(|| vec![0.05 * x, 0.2 * x]);
        let t = GridSpec {
            min: l.get(cli.t_min, "t-min")?.unwrap_or(0.0),
            max: l.get(cli.t_max, "t-max")?.unwrap_or(25.0 * ell),
            steps: l.get(cli.t_steps, "t-steps")?.unwrap_or(6),
        };
        let x_grid = GridSpec {
            min: l.get(cli.x_min, "x-min")?.unwrap_or(0.1 * ell),
            max: l.get(cli.x_max, "x-max")?.unwrap_or(20.0 * ell),
            steps: l.get(cli.x_steps, "x-steps")?.unwrap_or(200),
        };
        let omega = GridSpec {
            min: l.get(cli.omega_min, "omega-min")?.unwrap_or(1e-3),
            max: l.get(cli.omega_max, "omega-max")?.unwrap_or(1e3),
            steps: l.get(cli.omega_steps, "omega-steps")?.unwrap_or(61),
        };
        let defaults = QuadratureConfig::default();
        let quad = QuadratureConfig {
            rel_tol: l.get(cli.rel_tol, "rel-tol")?.unwrap_or(defaults.rel_tol),
            abs_tol: l.get(cli.abs_tol, "abs-tol")?.unwrap_or(defaults.abs_tol),
            max_subdivisions: l
                .get(cli.max_subdivisions, "max-subdivisions")?
                .unwrap_or(defaults.max_subdivisions),
            k_max_override: l.get(cli.k_max, "k-max")?,
            ..defaults
        };
        let format = l
            .get(cli.format.clone(), "format")?
            .map_or(Ok(Format::Csv), |f| f.parse())?;
        let output = l
            .get(cli.output.clone().map(|p| p.display().to_string()), "output")?
            .map(PathBuf::from);
        let threads = l.get(cli.threads, "threads")?;

        let cfg = RunConfig {
            command: cmd,
            sigma0,
            b,
            x,
            tau,
            tau_s,
            x0,
            ell,
            t,
            x_grid,
            omega,
            quad,
            format,
            output,
            threads,
            wrong_branch: cli.wrong_branch,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every sub-configuration the command will use.
    pub fn validate(&self) -> Result<(), CliError> {
        self.quad.validate()?;
        if self.sigma0.is_empty() {
            return Err(CliError::Config("at least one sigma0 is required".into()));
        }
        for &s in &self.sigma0 {
            self.drude(s)?;
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        match self.command {
            Command::MediumTable => {
                if !(self.omega.min > 0.0) {
                    return Err(CliError::Config(format!(
                        "omega-min must be > 0, got {}",
                        self.omega.min
                    )));
                }
                self.omega_points()?;
            }
            Command::Dispersion | Command::Switched => {
                self.probe()?;
                for &ts in &self.tau_s {
                    SwitchingSpec::new(ts)?;
                }
            }
            Command::Pulse => {
                self.pulse()?;
                self.t.points()?;
                let xs = self.x_grid.points()?;
                if xs.iter().any(|&x| x < 0.0) {
                    return Err(CliError::Config(
                        "pulse x grid must lie in the vacuum region x >= 0".into(),
                    ));
                }
            }
            Command::DelayScan => {
                self.pulse()?;
                if !(self.x > 0.0) {
                    return Err(CliError::Config(format!("probe point x must be > 0, got {}", self.x)));
                }
            }
            Command::Check => {
                self.pulse()?;
                self.probe()?;
            }
        }
        Ok(())
    }

    /// Log-spaced frequencies `ω·b` over the omega range, endpoints exact.
    pub fn omega_points(&self) -> Result<Vec<f64>, CliError> {
        let GridSpec { min, max, steps } = self.omega;
        let decades = uniform_grid(min.log10(), max.log10(), steps)?;
        let last = decades.len() - 1;
        Ok(decades
            .iter()
            .enumerate()
            .map(|(i, &e)| match i {
                0 => min,
                i if i == last => max,
                _ => 10f64.powf(e),
            })
            .collect())
    }

    pub fn drude(&self, sigma0: f64) -> Result<DrudeParams, CliError> {
        Ok(DrudeParams::new(sigma0, self.b)?)
    }

    /// Unit-coupling probe: tables report `⟨v²⟩·m²/g²`.
    pub fn probe(&self) -> Result<ProbeConfig, CliError> {
        Ok(ProbeConfig::new(1.0, self.x, self.tau.points()?)?)
    }

    pub fn pulse(&self) -> Result<PulseSpec, CliError> {
        Ok(PulseSpec::gaussian(self.x0, self.ell)?)
    }

    /// Every value-affecting parameter as `key=value`, in the config file
    /// syntax, so the echo can be fed back through `--config`.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = |v: &[f64]| v.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(",");
        let mut out = vec![
            ("command".to_string(), self.command.name().to_string()),
            ("sigma0".into(), list(&self.sigma0)),
            ("b".into(), format!("{:?}", self.b)),
        ];
        let mut grid = |name: &str, g: &GridSpec| {
            out.push((format!("{name}-min"), format!("{:?}", g.min)));
            out.push((format!("{name}-max"), format!("{:?}", g.max)));
            out.push((format!("{name}-steps"), g.steps.to_string()));
        };
        match self.command {
            Command::MediumTable => grid("omega", &self.omega),
            Command::Dispersion | Command::Switched => {
                grid("tau", &self.tau);
            }
            Command::Pulse => {
                grid("t", &self.t);
                grid("x", &self.x_grid);
            }
            Command::DelayScan | Command::Check => {}
        }
        match self.command {
            Command::Dispersion | Command::Check => out.push(("x".into(), format!("{:?}", self.x))),
            Command::Switched => {
                out.push(("x".into(), format!("{:?}", self.x)));
                out.push(("tau-s".into(), list(&self.tau_s)));
            }
            Command::DelayScan => out.push(("x".into(), format!("{:?}", self.x))),
            _ => {}
        }
        if matches!(self.command, Command::Pulse | Command::DelayScan | Command::Check) {
            out.push(("x0".into(), format!("{:?}", self.x0)));
            out.push(("ell".into(), format!("{:?}", self.ell)));
        }
        out.push(("rel-tol".into(), format!("{:?}", self.quad.rel_tol)));
        out.push(("abs-tol".into(), format!("{:?}", self.quad.abs_tol)));
        out.push(("max-subdivisions".into(), self.quad.max_subdivisions.to_string()));
        if let Some(k) = self.quad.k_max_override {
            out.push(("k-max".into(), format!("{k:?}")));
        }
        out
    }
}
