//! Command-line front end: `lzwalk <mode> [options]`.
//!
//! Modes are `evolve` (site distributions), `series` (generating-function
//! coefficients), `edge` (edge-state summary), `sweep` (edge quantities over a
//! field grid) and `verify` (cross-engine checks). Output is CSV or JSON with
//! fixed 17-digit floats, so identical configurations give identical bytes.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! failure, 3 I/O error.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use config::{Format, Mode, RunConfig, Settings, Spacing};
use error::{CliError, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

#[derive(Debug, Parser)]
#[command(name = "lzwalk", version, about = "Landau-Zener ladder dynamics as a quantum walk with a reflecting boundary")]
pub struct Cli {
    #[arg(value_enum)]
    pub mode: Mode,
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Tunneling probability p in (0, 1].
    #[arg(long, conflicts_with = "field")]
    pub p: Option<f64>,
    /// Electric field F > 0.
    #[arg(long)]
    pub field: Option<f64>,
    #[arg(long)]
    pub fbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta")]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta")]
    pub gamma_tilde: Option<f64>,
    /// Sets gamma = X and gamma-tilde = 0.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub j0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e0: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Highest power of z kept by series work.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub sites: Option<usize>,
    /// Comma-separated evolve snapshot times.
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<usize>>,
    #[arg(long)]
    pub fmin: Option<f64>,
    #[arg(long)]
    pub fmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Logarithmic sweep grid.
    #[arg(long)]
    pub log: bool,
    #[arg(long)]
    pub tau_max: Option<usize>,
    #[arg(long)]
    pub unitarity_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Cli {
    fn settings(&self) -> Settings {
        let (gamma, gamma_tilde) = match self.theta {
            Some(t) => (Some(t), Some(0.0)),
            None => (self.gamma, self.gamma_tilde),
        };
        Settings {
            mode: Some(self.mode),
            field: self.field,
            p: self.p,
            fbar: self.fbar,
            beta: self.beta,
            gamma,
            gamma_tilde,
            length: self.length,
            j0: self.j0,
            e0: self.e0,
            steps: self.steps,
            order: self.order,
            sites: self.sites,
            snapshots: self.snapshots.clone(),
            fmin: self.fmin,
            fmax: self.fmax,
            points: self.points,
            spacing: self.log.then_some(Spacing::Log),
            tau_max: self.tau_max,
            unitarity_tol: self.unitarity_tol,
            out: self.out.clone(),
            format: self.format,
        }
    }

    /// Merges the config file (if any) under the flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                Settings::from_text(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => Settings::default(),
        };
        self.settings().over(base).finish()
    }
}

/// Rendered output for a resolved configuration.
pub fn render(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let outcome = run::run(cfg)?;
    let text = match cfg.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(&cfg.entries()),
    };
    Ok((text, outcome.passed))
}

fn execute_config(cfg: &RunConfig) -> Result<u8, CliError> {
    let (text, passed) = render(cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    if cfg.mode == Mode::Verify && !passed {
        eprintln!("lzwalk: verification failed");
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn execute<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.resolve().and_then(|cfg| execute_config(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lzwalk: {e}");
            e.exit_code()
        }
    }
}
