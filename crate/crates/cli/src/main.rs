use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use eoplab_cli::commands::{
    run_bound, run_delta_probe, run_eop, run_werner_sweep, StateInput,
};
use eoplab_cli::runner::thread_cap;
use eoplab_cli::exit;
use eoplab_core::OptimizerOptions;

/// Entanglement-of-purification experiments: multi-start estimates, Werner
/// sweeps, bound certificates and convexity probes.
#[derive(Parser)]
#[command(name = "eoplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the entanglement of purification of a bipartite state
    #[command(group(ArgGroup::new("input").required(true).args(["state", "werner"])))]
    Eop {
        /// State file (JSON with dims and a row-major [re, im] matrix)
        state: Option<PathBuf>,
        /// Werner-state shorthand: singlet fraction in [0, 1]
        #[arg(long)]
        werner: Option<f64>,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Sweep Werner states over a singlet-fraction range, writing a CSV
    WernerSweep {
        fmin: f64,
        fmax: f64,
        steps: usize,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Combine per-component bounds and Holevo information into an upper
    /// bound on the regularized entanglement of purification
    Bound {
        /// Decomposition file (JSON)
        decomposition: PathBuf,
    },
    /// Scan a sweep CSV for midpoint convexity violations of the delta curve
    DeltaProbe {
        /// Sweep CSV produced by werner-sweep
        sweep: PathBuf,
        /// Violations above this report NONCONVEX
        #[arg(long, default_value_t = 1e-3)]
        threshold: f64,
    },
}

#[derive(Args)]
struct OptArgs {
    /// Haar-random restarts (trivial embeddings are added on top)
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output ancilla dimension |A'| (default: rank of the state)
    #[arg(long)]
    ancilla_a: Option<usize>,
    /// Output ancilla dimension |B'| (default: rank of the state)
    #[arg(long)]
    ancilla_b: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
}

impl OptArgs {
    fn to_options(&self) -> OptimizerOptions {
        OptimizerOptions {
            restarts: self.restarts,
            seed: self.seed,
            ancilla_a: self.ancilla_a,
            ancilla_b: self.ancilla_b,
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            ..OptimizerOptions::default()
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let threads = thread_cap()?;
    match cli.command {
        Command::Eop { state, werner, opt } => {
            let input = match (state, werner) {
                (Some(path), None) => StateInput::File(path),
                (None, Some(f)) => StateInput::Werner(f),
                _ => unreachable!("clap group enforces exactly one"),
            };
            let report = run_eop(&input, &opt.to_options(), threads)?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::WernerSweep { fmin, fmax, steps, out, opt } => {
            let outcome = run_werner_sweep(fmin, fmax, steps, &opt.to_options(), &out, threads)?;
            println!(
                "wrote {} rows to {}",
                outcome.rows.len(),
                outcome.out_path.display()
            );
            if outcome.line_search_failures > 0 {
                eprintln!(
                    "note: {} restarts ended in a flagged line-search stall",
                    outcome.line_search_failures
                );
            }
            Ok(exit::OK)
        }
        Command::Bound { decomposition } => {
            let report = run_bound(&decomposition)?;
            print!("{}", report.render());
            Ok(exit::OK)
        }
        Command::DeltaProbe { sweep, threshold } => {
            let report = run_delta_probe(&sweep, threshold)?;
            print!("{}", report.render());
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
