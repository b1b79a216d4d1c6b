use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bipen_harness::cli::{
    cmd_bench, cmd_bounds, cmd_continue, cmd_gen_con, cmd_gen_unc, cmd_solve, cmd_verify, Outcome,
};
use bipen_harness::experiment::Suite;

/// First-order penalty solvers for bilevel optimization: generate benchmark
/// instances, solve them to approximate KKT points, and verify residuals.
#[derive(Parser)]
#[command(name = "bipen", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an unconstrained linear-quadratic instance
    GenUnc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a constrained bilevel linear instance
    GenCon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the practical penalty method at a fixed accuracy
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Enforce and echo the strict parameter couplings rho = 1/eps,
        /// mu = 1/eps^2, eps0 = eps^{3/2} (or eps^{5/2})
        #[arg(long = "strict-paper-mode")]
        strict_paper_mode: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the geometric continuation schedule until the residual tolerance
    Continue {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        base: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the approximate-KKT certificate of a candidate point
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Print the closed-form complexity constant table
    Bounds {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Reproduce a benchmark table at chosen sizes
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        instances: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage errors and --help/--version land here; keep exit code 0
            // for the informational cases and 1 for genuine parse errors
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if informational { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let result = match &cli.command {
        Command::GenUnc { n, m, seed, out } => cmd_gen_unc(*n, *m, *seed, out),
        Command::GenCon { n, m, l, seed, out } => cmd_gen_con(*n, *m, *l, *seed, out),
        Command::Solve { instance, eps, strict_paper_mode, out } => {
            cmd_solve(instance, *eps, *strict_paper_mode, out.as_ref())
        }
        Command::Continue { instance, base, tol, out } => {
            cmd_continue(instance, *base, *tol, out.as_ref())
        }
        Command::Verify { instance, point, rho, mu } => cmd_verify(instance, point, *rho, *mu),
        Command::Bounds { instance, eps } => cmd_bounds(instance, *eps),
        Command::Bench { suite, sizes, instances, seed, out } => {
            match Suite::parse(suite) {
                Ok(s) => cmd_bench(s, sizes, *instances, *seed, out),
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ResidualFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
