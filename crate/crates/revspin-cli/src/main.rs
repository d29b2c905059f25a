//! Command-line front end. Renders figure datasets, scalar metric
//! tables, parameter sweeps, and closed-form/simulation comparisons as
//! CSV, so plots and tables can be regenerated from one binary.

mod commands;
mod expr;
mod output;
mod scenario;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Failure classes, each mapped onto a process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Filesystem problem (exit 1).
    Io(String),
    /// Malformed flag value or an inconsistent scenario (exit 2).
    Usage(String),
    /// The requested quantity is undefined at these parameters, e.g. a
    /// reversal where the reversibility condition fails (exit 3).
    Condition(String),
    /// Numerical disagreement beyond tolerance (exit 4).
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Condition(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Usage(m) | Failure::Condition(m) | Failure::Numerical(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "revspin", version, about = "Reversible spin-measurement statistics as CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the dataset behind one figure to fig<ID>.csv
    Figure {
        /// Figure number: 1, 3, 4, 5, 6, 7, 8, 9, 10, or 11
        #[arg(long, value_parser = parse_figure_id)]
        id: u8,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Write scalar measurement and recovery metrics to metrics.csv
    Metrics {
        /// Named parameter set: paper-3-1, paper-4-2, or paper-4-3-zcat
        #[arg(long)]
        preset: Option<String>,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Compare closed-form amplitudes against the tensor-product
    /// simulation over a parameter grid and report per-spin deviations
    OracleCheck {
        /// Largest probe spin to test, given as 2j
        #[arg(long = "max-2j", default_value_t = 8)]
        max_two_j: i32,
        /// Largest system spin to test, given as 2s
        #[arg(long = "max-2s", default_value_t = 6)]
        max_two_s: i32,
        /// Amplitude deviation tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Vary one parameter over a grid and write recovery metrics per
    /// point to sweep.csv
    Sweep {
        /// Which parameter varies
        #[arg(long, value_enum)]
        vary: Vary,
        /// Inclusive grid A:B:STEP, each part in the varied
        /// parameter's grammar
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    J,
    G,
    Theta,
    Phi,
}

/// Scenario overrides shared by the data-producing subcommands.
/// Unset flags fall back to per-target defaults.
#[derive(Args, Default)]
pub struct ScenarioArgs {
    /// System spin s (half-integer grammar, e.g. "10" or "3/2")
    #[arg(long)]
    s: Option<String>,
    /// Probe spin j; for figure 7 the upper end of the j sweep
    #[arg(long)]
    j: Option<String>,
    /// Coupling constant (angle grammar)
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Probe polar angle (angle grammar)
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Probe azimuth (angle grammar); for figure 8 the azimuth of the
    /// equatorial state being prepared
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Initial system state: equal | basis:SIGMA | coherent-x |
    /// coherent-eq:PHI | cat-x:RE,IM,RE,IM | cat-z:RE,IM,RE,IM |
    /// amps:FILE
    #[arg(long)]
    state: Option<String>,
    /// Bloch angle between the two hypothesis states of figure 6
    /// (angle grammar)
    #[arg(long)]
    gamma: Option<String>,
    /// Conditioning outcome for figure 8 (half-integer grammar)
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
}

fn parse_figure_id(text: &str) -> Result<u8, String> {
    let id: u8 = text
        .parse()
        .map_err(|_| format!("{text:?} is not a figure number"))?;
    if matches!(id, 1 | 3..=11) {
        Ok(id)
    } else {
        Err(format!("figure {id} has no data target"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Figure { id, out, scenario } => commands::figure(id, &out, &scenario),
        Command::Metrics { preset, out, scenario } => {
            commands::metrics(preset.as_deref(), &out, &scenario)
        }
        Command::OracleCheck { max_two_j, max_two_s, tol } => {
            commands::oracle_check(max_two_j, max_two_s, tol)
        }
        Command::Sweep { vary, range, out, scenario } => {
            commands::sweep(vary, &range, &out, &scenario)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
