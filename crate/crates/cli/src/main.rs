//! `duality` - command-line front end for the coherence-polarization duality
//! library: single-state reports, parameter sweeps, channel trajectories,
//! screen profiles, and the figure-reproduction aliases.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 state-validation
//! failure (the ValidationReport is printed to stderr as JSON).

#![forbid(unsafe_code)]

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self { code: 1, message }
    }

    pub fn validation(message: String) -> Self {
        Self { code: 2, message }
    }
}

impl From<duality_core::Error> for CliError {
    fn from(e: duality_core::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "duality",
    version,
    about = "Visibility, distinguishability and open-system dynamics of path-polarization photon states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every duality observable on one state
    Report(ReportArgs),
    /// Sweep a state family over its parameter and tabulate V, D, D2+V2
    Sweep(SweepArgs),
    /// Evolve a state under an environment model and tabulate the trajectory
    Evolve(EvolveArgs),
    /// Sample the detection-screen intensity profile
    Screen(ScreenArgs),
    /// Check the completeness relation of a channel at one probability
    #[command(name = "validate-channel")]
    ValidateChannel(ValidateChannelArgs),
    /// Alias: sweep psi1 over a, 201 samples
    Figure2(FigureArgs),
    /// Alias: sweep psi2 over a with b = 1/sqrt(2), 201 samples
    Figure3(FigureArgs),
    /// Alias: sweep werner over eta, 201 samples
    Figure4(FigureArgs),
    /// Alias: evolve psi-mixed under dephasing, gamma = 1, 200 points on [0, 5]
    Figure5(FigureArgs),
    /// Alias: evolve psi-mixed under scattering, gamma = 1, 200 points on [0, 5]
    Figure6(FigureArgs),
}

#[derive(Args)]
pub struct ReportArgs {
    /// Builtin state name: psi1, psi2, werner, psi-mixed, mixed-identity
    #[arg(long)]
    pub builtin: Option<String>,
    /// JSON state file
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Path-1 amplitude for psi1/psi2
    #[arg(long)]
    pub a: Option<f64>,
    /// Path-2 H amplitude weight for psi2
    #[arg(long)]
    pub b: Option<f64>,
    /// Werner mixing parameter
    #[arg(long)]
    pub eta: Option<f64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    pub format: Option<String>,
    /// Validation and empty-path tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Reserved for randomized commands
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON config file mirroring the flag names
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Family to sweep: psi1, psi2 or werner
    #[arg(long)]
    pub builtin: Option<String>,
    /// Fixed b for the psi2 family
    #[arg(long)]
    pub b: Option<f64>,
    /// Number of parameter samples over [0, 1]
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct EvolveArgs {
    /// Initial state (defaults to psi-mixed)
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Environment model: dephasing or scattering
    #[arg(long)]
    pub model: Option<String>,
    /// Interaction rate Gamma
    #[arg(long)]
    pub gamma: Option<f64>,
    /// End of the time grid (default 5/Gamma)
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub steps: Option<usize>,
    /// Evolution method: closed or iterated
    #[arg(long)]
    pub method: Option<String>,
    /// Channel applications per grid point (iterated method)
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScreenArgs {
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Wavenumber k
    #[arg(long)]
    pub k: Option<f64>,
    /// Slit separation d
    #[arg(long)]
    pub d: Option<f64>,
    /// Screen distance L
    #[arg(long = "L")]
    pub big_l: Option<f64>,
    /// Scan start (default: -1.5 fringes)
    #[arg(long = "x-min")]
    pub x_min: Option<f64>,
    /// Scan end (default: +1.5 fringes)
    #[arg(long = "x-max")]
    pub x_max: Option<f64>,
    /// Number of scan samples
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateChannelArgs {
    /// Channel model: dephasing or scattering
    #[arg(long)]
    pub model: Option<String>,
    /// Interaction probability in [0, 1]
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Report(args) => commands::cmd_report(args),
        Command::Sweep(args) => commands::cmd_sweep(args),
        Command::Evolve(args) => commands::cmd_evolve(args),
        Command::Screen(args) => commands::cmd_screen(args),
        Command::ValidateChannel(args) => commands::cmd_validate_channel(args),
        Command::Figure2(args) => commands::cmd_figure(2, args),
        Command::Figure3(args) => commands::cmd_figure(3, args),
        Command::Figure4(args) => commands::cmd_figure(4, args),
        Command::Figure5(args) => commands::cmd_figure(5, args),
        Command::Figure6(args) => commands::cmd_figure(6, args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            e.code
        }
    }
}
