//! Solves the default 1D benchmark with the accelerated gradient method and prints a
//! short summary of the plan.
//!
//! cargo run --release --example solve_benchmark -- [cells] [gamma]

use qrot::model::primal_objective;
use qrot::problems::{default_benchmark, CostKind};
use qrot::solvers::{solve, Algorithm, SolverConfig};

fn main() -> qrot::Result<()> {
    let mut args = std::env::args().skip(1);
    let cells: usize = args.next().map_or(100, |s| s.parse().expect("cells"));
    let gamma: f64 = args.next().map_or(10.0, |s| s.parse().expect("gamma"));

    let problem = default_benchmark(cells, CostKind::SquaredDistance)?;
    let config = SolverConfig::new(Algorithm::Nesterov, gamma)
        .with_tol(1e-6)
        .with_history(false);
    let report = solve(&problem, &config)?;

    let pi = report.final_plan.as_array();
    let support = pi.iter().filter(|&&p| p > 0.0).count();
    println!(
        "{cells}x{cells}, gamma = {gamma}: converged = {} after {} iterations ({:.2?})",
        report.converged, report.iterations, report.elapsed
    );
    println!("max violation     {:.3e}", report.final_violation);
    println!(
        "primal objective  {:.6}",
        primal_objective(&report.final_plan, problem.cost(), gamma)
    );
    println!(
        "support           {support} of {} cells ({:.1}%)",
        pi.len(),
        100.0 * support as f64 / pi.len() as f64
    );
    Ok(())
}
