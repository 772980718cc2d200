//! The command-line subcommands as library functions. Each returns an
//! [`Outcome`]; [`exit_code`] maps results to process exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::output::{write_matrix, write_run_record, write_vector};
use super::problem_file::ProblemFile;
use super::svg::{convergence_plot, Series};
use crate::dual::duality_gap;
use crate::error::{Error, Result};
use crate::model::TransportProblem;
use crate::oracle::{exact_solve, MAX_CELLS};
use crate::problems::CostKind;
use crate::solvers::{solve, Algorithm, ConvergenceReport, SolverConfig};

/// Plan discrepancy accepted by `oracle-check`.
pub const ORACLE_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Every requested solve met its tolerance (exit 0).
    Converged,
    /// At least one solve hit the iteration cap, or the oracle check
    /// found a discrepancy above tolerance (exit 2).
    NotConverged,
}

/// 0 on success, 2 when a run did not converge, 1 on any error.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Converged) => 0,
        Ok(Outcome::NotConverged) => 2,
        Err(_) => 1,
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub tau: Option<f64>,
    pub history_stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: crate::solvers::DEFAULT_TOL,
            max_iters: crate::solvers::DEFAULT_MAX_ITERS,
            tau: None,
            history_stride: 1,
        }
    }
}

impl RunOptions {
    fn config(&self, algorithm: Algorithm, gamma: f64) -> SolverConfig {
        SolverConfig::new(algorithm, gamma)
            .with_tol(self.tol)
            .with_max_iters(self.max_iters)
            .with_tau(self.tau)
            .with_history_stride(self.history_stride)
    }
}

fn load(path: &Path) -> Result<(ProblemFile, TransportProblem)> {
    let file = ProblemFile::load(path)?;
    let problem = file.to_problem()?;
    Ok((file, problem))
}

fn prepare_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Solves one problem and writes plan, potentials and run record into `out`.
pub fn run_solve(
    problem_path: &Path,
    algorithm: Algorithm,
    options: &RunOptions,
    out: &Path,
) -> Result<Outcome> {
    let (file, problem) = load(problem_path)?;
    let config = options.config(algorithm, file.gamma);
    config.validate()?;
    prepare_out_dir(out)?;
    let report = solve(&problem, &config)?;
    write_matrix(&out.join("plan.txt"), report.final_plan.as_array())?;
    write_vector(&out.join("alpha.txt"), &report.final_potentials.alpha)?;
    write_vector(&out.join("beta.txt"), &report.final_potentials.beta)?;
    write_run_record(out, &report, &config)?;
    Ok(outcome(report.converged))
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    }
}

/// Runs the four quadratic methods concurrently, writes one run record each
/// and `convergence.svg`.
pub fn run_compare(problem_path: &Path, options: &RunOptions, out: &Path) -> Result<Outcome> {
    let (file, problem) = load(problem_path)?;
    let configs: Vec<SolverConfig> = Algorithm::QUADRATIC
        .iter()
        .map(|&alg| options.config(alg, file.gamma))
        .collect();
    for c in &configs {
        c.validate()?;
    }
    prepare_out_dir(out)?;

    let reports: Vec<Result<ConvergenceReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|config| {
                let problem = &problem;
                scope.spawn(move || {
                    let report = solve(problem, config)?;
                    write_run_record(out, &report, config)?;
                    Ok(report)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;

    let series: Vec<Series<'_>> = reports
        .iter()
        .map(|r| Series {
            label: r.algorithm.name(),
            points: r
                .history
                .iter()
                .map(|h| (h.iteration, h.max_violation))
                .collect(),
        })
        .collect();
    let (n, m) = problem.dims();
    let title = format!("{n}x{m}, {} cost, gamma = {}", file.cost.name(), file.gamma);
    let svg_path = out.join("convergence.svg");
    fs::write(&svg_path, convergence_plot(&title, &series)).map_err(|e| Error::io(svg_path, e))?;
    Ok(outcome(reports.iter().all(|r| r.converged)))
}

/// Compares every quadratic method against the exact oracle on a tiny instance.
pub fn run_oracle_check(
    problem_path: &Path,
    options: &RunOptions,
    report_to: &mut dyn Write,
) -> Result<Outcome> {
    let (file, problem) = load(problem_path)?;
    let (n, m) = problem.dims();
    if n * m > MAX_CELLS {
        return Err(Error::TooLarge {
            what: "N * M",
            size: n * m,
            limit: MAX_CELLS,
        });
    }
    let gamma = file.gamma;
    let (exact, _) = exact_solve(&problem, gamma)?;
    let mut all_ok = true;
    let stdout_err = |e| Error::io(PathBuf::from("<output>"), e);
    for alg in Algorithm::QUADRATIC {
        let config = options.config(alg, gamma).with_history(false);
        let report = solve(&problem, &config)?;
        let discrepancy = report.final_plan.max_abs_diff(&exact);
        let gap = duality_gap(
            &report.final_potentials,
            &report.final_plan,
            &problem,
            gamma,
        );
        let ok = report.converged && discrepancy <= ORACLE_AGREEMENT;
        all_ok &= ok;
        writeln!(
            report_to,
            "{:<18} iterations={:<7} plan_discrepancy={:.3e} duality_gap={:.3e} {}",
            alg.name(),
            report.iterations,
            discrepancy,
            gap,
            if ok { "ok" } else { "FAIL" }
        )
        .map_err(stdout_err)?;
    }
    Ok(outcome(all_ok))
}

/// Writes a default benchmark problem file to `out`, or to `to` when `out` is `None`.
pub fn run_generate(
    cells: usize,
    cost: CostKind,
    gamma: f64,
    out: Option<&Path>,
    to: &mut dyn Write,
) -> Result<()> {
    let file = ProblemFile::benchmark(cells, cost, gamma);
    let text = file.to_toml();
    // validates the result, e.g. a non-positive gamma
    ProblemFile::parse(&text).map_err(|message| Error::Parse {
        path: out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        message,
    })?;
    match out {
        Some(path) => file.save(path),
        None => to
            .write_all(text.as_bytes())
            .map_err(|e| Error::io(PathBuf::from("<stdout>"), e)),
    }
}
