use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qrot::io::{self, Outcome, RunOptions};
use qrot::problems::CostKind;
use qrot::solvers::{Algorithm, DEFAULT_MAX_ITERS, DEFAULT_TOL};

/// Quadratically regularized optimal transport on 1D grids.
#[derive(Parser)]
#[command(name = "qrot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file with one algorithm.
    Solve {
        problem: PathBuf,
        #[arg(long, default_value = "fixed-point")]
        algorithm: Algorithm,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run all four quadratic algorithms and plot their convergence.
    Compare {
        problem: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check the iterative solvers against the exact active-set solution.
    OracleCheck {
        problem: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit a default benchmark problem file.
    Generate {
        #[arg(long, default_value = "squared")]
        cost: CostKind,
        #[arg(long, default_value_t = 10.0)]
        gamma: f64,
        #[arg(long, default_value_t = qrot::problems::DEFAULT_CELLS)]
        cells: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Step size override for the gradient methods.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 1)]
    history_stride: usize,
}

impl RunArgs {
    fn options(&self, default_tol: f64) -> RunOptions {
        RunOptions {
            tol: self.tol.unwrap_or(default_tol),
            max_iters: self.max_iters,
            tau: self.tau,
            history_stride: self.history_stride,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve {
            problem,
            algorithm,
            run,
            out,
        } => io::run_solve(&problem, algorithm, &run.options(DEFAULT_TOL), &out),
        Command::Compare { problem, run, out } => {
            io::run_compare(&problem, &run.options(DEFAULT_TOL), &out)
        }
        Command::OracleCheck { problem, run } => {
            io::run_oracle_check(&problem, &run.options(1e-9), &mut std::io::stdout())
        }
        Command::Generate {
            cost,
            gamma,
            cells,
            out,
        } => io::run_generate(cells, cost, gamma, out.as_deref(), &mut std::io::stdout())
            .map(|()| Outcome::Converged),
    };
    match &result {
        Ok(Outcome::NotConverged) => {
            eprintln!("qrot: a run hit the iteration cap or failed its check")
        }
        Err(e) => eprintln!("qrot: {e}"),
        Ok(Outcome::Converged) => {}
    }
    ExitCode::from(io::exit_code(&result) as u8)
}
