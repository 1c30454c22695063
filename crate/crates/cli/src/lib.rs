//! Command-line driver: resolves a [`RunConfig`], dispatches the command,
//! writes the resulting [`CurveTable`] and maps the outcome to an exit code.

pub mod checks;
pub mod commands;
pub mod config;
pub mod table;

use std::fmt;
use std::io::Write;

use clap::Parser;

pub use config::{Cli, Command, RunConfig};
pub use table::{CurveTable, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file, parameter values or output path.
    Config(String),
    /// A numerical routine failed at some grid point.
    Numerical(mirror_qbm::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mirror_qbm::Error> for CliError {
    fn from(e: mirror_qbm::Error) -> Self {
        use mirror_qbm::Error as E;
        match e.root() {
            E::InvalidParameter(_) | E::Config(_) | E::Domain { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NONCONVERGENCE,
        }
    }
}

/// A table plus whatever went wrong while filling it.
#[derive(Debug)]
pub struct Outcome {
    pub table: CurveTable,
    /// Grid points that could not be evaluated (their cells are missing).
    pub failures: Vec<mirror_qbm::Error>,
    /// Check rows that did not pass.
    pub failed_checks: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if let Some(e) = self.failures.first() {
            CliError::from(e.clone()).exit_code()
        } else if self.failed_checks > 0 {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }
}

/// Runs one resolved configuration on a pool of `cfg.threads` workers.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let job = || match cfg.command {
        Command::MediumTable => commands::run_medium_table(cfg),
        Command::Dispersion => commands::run_dispersion_figure(cfg),
        Command::Switched => commands::run_switched_figure(cfg),
        Command::Pulse => commands::run_pulse_figure(cfg),
        Command::DelayScan => commands::run_delay_scan(cfg),
        Command::Check => checks::run_check_suite(cfg),
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {n} threads: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = RunConfig::resolve(&cli).and_then(|cfg| {
        let outcome = execute(&cfg)?;
        write_output(&cfg, &outcome.table)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for e in &outcome.failures {
                eprintln!("mirror-qbm: {}", CliError::from(e.clone()));
            }
            if outcome.failed_checks > 0 {
                eprintln!("mirror-qbm: {} check(s) failed", outcome.failed_checks);
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("mirror-qbm: {e}");
            e.exit_code()
        }
    }
}

fn write_output(cfg: &RunConfig, table: &CurveTable) -> Result<(), CliError> {
    let text = table.render(cfg.format);
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}"))),
    }
}
