//! Argument parsing and dispatch for the `bimetro` binary.

use std::ffi::OsString;

use bimetro_core::states::NumberBudget;
use clap::{Args, Parser, Subcommand};

use crate::commands::{bound_grid, cmd_bound, cmd_fig4, cmd_gaussian, cmd_optimal_state, cmd_qfi, fig4_csv, parse_grid, Family, Frame, QfiRequest};
use crate::error::{CliError, Result};
use crate::format::to_json_string;
use crate::input::{parse_state, parse_state_file, EpsSource, ProbeState, STATE_HELP};
use crate::verify::{run_verify, Fault, VerifyConfig, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "bimetro", version, about = "Phase-estimation bounds for two-mode linear interferometers", after_help = STATE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// QFI and Cramer-Rao uncertainty of a probe state.
    #[command(after_help = STATE_HELP)]
    Qfi(QfiArgs),
    /// Maximal QFI under a number budget (JSON, or CSV with --grid/--csv).
    Bound(BoundArgs),
    /// Optimal Gaussian QFI against the number-budget bound (CSV).
    Fig4(Fig4Args),
    /// Analyse a pure two-mode Gaussian state.
    #[command(after_help = STATE_HELP)]
    Gaussian(GaussianArgs),
    /// Construct an optimal probe for a mean particle number.
    OptimalState(OptimalArgs),
    /// Run the cross-check suite and print a JSON summary.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct EpsArgs {
    /// Special case: antisymmetric, symmetric or unbalanced.
    #[arg(long)]
    case: Option<String>,
    /// Normal-mode eigenvalues `eps_plus,eps_minus`.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Catalog name, inline JSON or JSON file.
    #[arg(long)]
    circuit: Option<String>,
    /// Operating point of the circuit.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
}

impl EpsArgs {
    fn source(&self) -> Result<EpsSource> {
        EpsSource::from_args(self.case.as_deref(), self.eps.as_deref(), self.circuit.as_deref(), self.phi)
    }
}

#[derive(Args, Debug)]
struct StateArgs {
    /// State constructor, e.g. `quasi-noon:N=4,var=2`.
    #[arg(long, conflicts_with = "state_file")]
    state: Option<String>,
    /// Fock or Gaussian state as a JSON document.
    #[arg(long)]
    state_file: Option<String>,
}

impl StateArgs {
    fn load(&self) -> Result<(ProbeState, String)> {
        match (&self.state, &self.state_file) {
            (Some(s), None) => Ok((parse_state(s)?, s.clone())),
            (None, Some(p)) => Ok((parse_state_file(p)?, p.clone())),
            _ => Err(CliError::usage("one of --state or --state-file is required")),
        }
    }
}

/// Number of independent trials in the Cramer-Rao bound.
fn trials_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Args, Debug)]
struct QfiArgs {
    #[command(flatten)]
    eps: EpsArgs,
    #[command(flatten)]
    state: StateArgs,
    /// Basis the state is written in.
    #[arg(long, value_enum, default_value_t = Frame::Normal)]
    frame: Frame,
    /// Number of repetitions.
    #[arg(long, default_value_t = 1, value_parser = trials_arg())]
    trials: u32,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    eps: EpsArgs,
    /// Mean total particle number.
    #[arg(long, requires = "var", conflicts_with = "grid", allow_hyphen_values = true)]
    n: Option<f64>,
    /// Variance of the total particle number.
    #[arg(long, requires = "n", allow_hyphen_values = true)]
    var: Option<f64>,
    /// CSV file with columns `N` and `var`.
    #[arg(long)]
    grid: Option<String>,
    /// Emit CSV instead of JSON.
    #[arg(long)]
    csv: bool,
    #[arg(long, default_value_t = 1, value_parser = trials_arg())]
    trials: u32,
}

#[derive(Args, Debug)]
struct Fig4Args {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    n_min: f64,
    #[arg(long, default_value_t = 100.0)]
    n_max: f64,
    #[arg(long, default_value_t = 1.0)]
    n_step: f64,
    /// Explicit comma-separated list of N, overriding the range.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct GaussianArgs {
    #[command(flatten)]
    eps: EpsArgs,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 1, value_parser = trials_arg())]
    trials: u32,
}

#[derive(Args, Debug)]
struct OptimalArgs {
    #[command(flatten)]
    eps: EpsArgs,
    #[arg(long, value_enum, default_value_t = Family::Gaussian)]
    family: Family,
    /// Mean total particle number.
    #[arg(long, allow_hyphen_values = true)]
    n: f64,
    /// Number variance (quasi-noon and cat families).
    #[arg(long, allow_hyphen_values = true)]
    var: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, env = "BIMETRO_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random constrained distributions drawn for the bound check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }
}

fn fig4_grid(a: &Fig4Args) -> Result<Vec<f64>> {
    if let Some(ns) = &a.n {
        return Ok(ns.clone());
    }
    if !(a.n_step > 0.0) || !(a.n_min <= a.n_max) || !a.n_max.is_finite() {
        return Err(CliError::usage("need n-min <= n-max and n-step > 0"));
    }
    let steps = ((a.n_max - a.n_min) / a.n_step + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| a.n_min + k as f64 * a.n_step).collect())
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Qfi(a) => {
            let (state, label) = a.state.load()?;
            let req = QfiRequest { source: a.eps.source()?, state, label, frame: a.frame, trials: a.trials };
            Ok(Outcome::ok(to_json_string(&cmd_qfi(&req)?)))
        }
        Command::Bound(a) => {
            let source = a.eps.source()?;
            match (&a.grid, a.n, a.var) {
                (Some(path), None, None) => {
                    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    Ok(Outcome::ok(bound_grid(&source, &parse_grid(&text)?, a.trials)?))
                }
                (None, Some(n), Some(v)) => {
                    let b = NumberBudget::new(n, v)?;
                    if a.csv {
                        Ok(Outcome::ok(bound_grid(&source, &[b], a.trials)?))
                    } else {
                        Ok(Outcome::ok(to_json_string(&cmd_bound(&source, &b, a.trials)?)))
                    }
                }
                _ => Err(CliError::usage("give --n and --var, or --grid")),
            }
        }
        Command::Fig4(a) => Ok(Outcome::ok(fig4_csv(&cmd_fig4(&fig4_grid(&a)?)?)?)),
        Command::Gaussian(a) => {
            let (state, _) = a.state.load()?;
            let ProbeState::Gaussian(g) = state else {
                return Err(CliError::usage("`gaussian` needs a Gaussian state (squeezed-vacuum, coherent, gaussian or an {r,u,alpha} file)"));
            };
            Ok(Outcome::ok(to_json_string(&cmd_gaussian(&g, &a.eps.source()?, a.trials)?)))
        }
        Command::OptimalState(a) => {
            Ok(Outcome::ok(to_json_string(&cmd_optimal_state(a.family, a.n, a.var, &a.eps.source()?)?)))
        }
        Command::Verify(a) => {
            let summary = run_verify(&VerifyConfig { seed: a.seed, samples: a.samples, fault: a.inject_fault });
            let code = summary.exit_code();
            Ok(Outcome { stdout: to_json_string(&summary.to_json()), stderr: String::new(), code })
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.use_stderr() {
                true => Outcome { stdout: String::new(), stderr: text, code: 1 },
                false => Outcome::ok(text),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}
