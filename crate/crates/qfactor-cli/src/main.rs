//! `qfactor`: factorizability checks, entanglement measures, family sweeps
//! and dissipative-chain trajectories, all emitting CSV.
//!
//! Exit codes: 0 success, 2 input parse error, 3 arity/domain error,
//! 4 numerical divergence.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, SetChoice};

#[derive(Parser)]
#[command(
    name = "qfactor",
    version,
    about = "Qubit factorization and decay toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitialChoice {
    /// Symmetric W state (coefficients 1/sqrt(3))
    W,
    /// Balanced GHZ state
    Ghz,
    /// (|000> + |111> + |001> + |110>)/2
    Psi1,
    /// 3-qubit state loaded from --in
    File,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C^(n) for a state file in coefficient and density form
    Measure {
        #[arg(long = "in")]
        input: PathBuf,
        /// Expected qubit count; must match the file when given
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = SetChoice::Paper)]
        set: SetChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a condition list as CSV (row count goes to stderr)
    Conditions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SetChoice::Paper)]
        set: SetChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide factorizability of a state file and emit its qubit factors
    Factorize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep C^(3) over the real W-state family on the unit disk
    SweepW {
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep C^(3) over the GHZ family C1 = cos t, C8 = sin t
    SweepGhz {
        #[arg(long, default_value_t = 721)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare coefficient and density measures on random states
    RandomAudit {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SetChoice::Paper)]
        set: SetChoice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the dissipative chain and emit the trajectory CSV
    Evolve {
        #[arg(long, value_enum)]
        initial: InitialChoice,
        /// State file for --initial file
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Parameter JSON; falls back to QFACTOR_DEFAULT_PARAMS, then to the
        /// built-in reference values
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 200.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.005)]
        dt: f64,
        #[arg(long, default_value_t = 100)]
        sample_every: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Measure { input, n, set, out } => {
            let csv = commands::measure_csv(&input, n, set)?;
            emit(out.as_deref(), &csv)
        }
        Command::Conditions { n, set, out } => {
            let (csv, count) = commands::conditions_csv(n, set)?;
            eprintln!("conditions: {count}");
            emit(out.as_deref(), &csv)
        }
        Command::Factorize { input, tol, out } => {
            let (csv, verdict) = commands::factorize_csv(&input, tol)?;
            eprintln!("{verdict}");
            emit(out.as_deref(), &csv)
        }
        Command::SweepW { grid, out } => {
            let csv = commands::sweep_w_csv(grid)?;
            emit(out.as_deref(), &csv)
        }
        Command::SweepGhz { grid, out } => {
            let csv = commands::sweep_ghz_csv(grid)?;
            emit(out.as_deref(), &csv)
        }
        Command::RandomAudit {
            n,
            count,
            seed,
            set,
            out,
        } => {
            let (csv, max_diff) = commands::random_audit_csv(n, count, seed, set)?;
            eprintln!("max diff: {max_diff}");
            emit(out.as_deref(), &csv)
        }
        Command::Evolve {
            initial,
            input,
            params,
            t_end,
            dt,
            sample_every,
            out,
        } => {
            let state = match initial {
                InitialChoice::W => commands::InitialState::W,
                InitialChoice::Ghz => commands::InitialState::Ghz,
                InitialChoice::Psi1 => commands::InitialState::Psi1,
                InitialChoice::File => {
                    let path = input
                        .ok_or(CliError::Domain("--initial file requires --in".to_string()))?;
                    commands::InitialState::File(path)
                }
            };
            let csv = commands::evolve_csv(state, params.as_deref(), t_end, dt, sample_every)?;
            emit(out.as_deref(), &csv)
        }
    }
}

fn emit(out: Option<&std::path::Path>, csv: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|e| CliError::Parse(e.to_string())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
