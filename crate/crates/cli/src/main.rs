mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcorr::Error;

/// Connected correlation-tensor entanglement measures.
#[derive(Parser)]
#[command(name = "qcorr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct StateArgs {
    /// Catalog name (`ghz:3`, `w(4)`, `werner(0.7)`, ...), ket expression,
    /// or `@file` holding ket text or state JSON.
    #[arg(long)]
    pub state: String,
    /// Site dimensions, e.g. `2,3`. Defaults to qubits for kets.
    #[arg(long)]
    pub dims: Option<String>,
    /// Comma-separated 1-based sites, or `all` (default).
    #[arg(long)]
    pub subset: Option<String>,
    /// Largest subset order to evaluate.
    #[arg(long, default_value_t = qcorr::measure::DEFAULT_MAX_ORDER)]
    pub max_qubits: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Clone)]
pub struct RoofArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Ensemble size; defaults to rank².
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Sweep budget per restart.
    #[arg(long, default_value_t = 400)]
    pub max_iterations: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate B on a subset.
    Compute {
        #[command(flatten)]
        state: StateArgs,
        /// Override the GHZ-calibrated normalization.
        #[arg(long)]
        norm: Option<f64>,
        /// Minimize over ensemble decompositions instead of evaluating directly.
        #[arg(long)]
        roof: bool,
        #[command(flatten)]
        budget: RoofArgs,
    },
    /// Dump the connected (or raw) correlation tensor.
    Tensor {
        #[command(flatten)]
        state: StateArgs,
        /// Raw tensor M instead of the connected M'.
        #[arg(long)]
        raw: bool,
        /// Include zero entries.
        #[arg(long)]
        all: bool,
    },
    /// Recompute the reference tables and the Werner closed form.
    Tables {
        #[arg(long)]
        json: bool,
        /// Also write the Markdown report here.
        #[arg(long)]
        markdown_out: Option<std::path::PathBuf>,
        /// Also write the JSON report here.
        #[arg(long)]
        json_out: Option<std::path::PathBuf>,
    },
    /// Print the GHZ-calibrated normalization for m sites.
    Calibrate {
        m: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Convex-roof upper bound on B for a (mixed) state.
    Roof {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        norm: Option<f64>,
        #[command(flatten)]
        budget: RoofArgs,
    },
    /// Run a randomized property suite.
    Props {
        /// separable-zero, nonneg, lu-invariance, product-cut or permutation.
        check: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    /// A library parse error plus the text it refers to.
    Located(Error, String),
    Input(String),
    /// A check ran and failed; the report is already printed.
    Failed,
}

impl CliError {
    pub fn located(e: Error, text: &str) -> Self {
        match e {
            Error::Parse { .. } => CliError::Located(e, text.to_string()),
            other => CliError::Lib(other),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Input(_) | CliError::Located(..) => 2,
            CliError::Lib(e) => match e {
                Error::Parse { .. } | Error::UnknownState(_) | Error::InvalidParameter(_) => 2,
                Error::InvalidRegister(_)
                | Error::DimensionOverflow
                | Error::InvalidSubset(_)
                | Error::Shape(_) => 3,
                Error::Numeric(_) => 4,
            },
        }
    }

    fn report(&self) {
        match self {
            CliError::Lib(e) => eprintln!("error: {e}"),
            CliError::Located(e, text) => {
                eprintln!("error: {e}");
                if let Error::Parse { pos, .. } = e {
                    eprintln!("  {text}");
                    eprintln!(
                        "  {}^",
                        " ".repeat(text[..(*pos).min(text.len())].chars().count())
                    );
                }
            }
            CliError::Input(msg) => eprintln!("error: {msg}"),
            CliError::Failed => {}
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute {
            state,
            norm,
            roof,
            budget,
        } => {
            if roof {
                commands::roof(&state, norm, &budget)
            } else {
                commands::compute(&state, norm)
            }
        }
        Command::Tensor { state, raw, all } => commands::tensor(&state, raw, all),
        Command::Tables {
            json,
            markdown_out,
            json_out,
        } => commands::tables(json, markdown_out.as_deref(), json_out.as_deref()),
        Command::Calibrate { m, dim, json } => commands::calibrate(m, dim, json),
        Command::Roof {
            state,
            norm,
            budget,
        } => commands::roof(&state, norm, &budget),
        Command::Props {
            check,
            trials,
            seed,
            json,
        } => commands::props(&check, trials, seed, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}
