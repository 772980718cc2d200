//! Solves a random 3x4 instance exactly with the active-set oracle and
//! compares every iterative method against it.

use ndarray::{Array1, Array2};
use qrot::dual::duality_gap;
use qrot::oracle::exact_candidate;
use qrot::solvers::{solve, Algorithm, SolverConfig};
use qrot::TransportProblem;

fn main() -> qrot::Result<()> {
    // a small deterministic instance; any positive balanced marginals work
    let mu = Array1::from(vec![0.2, 0.5, 0.3]);
    let nu = Array1::from(vec![0.1, 0.4, 0.3, 0.2]);
    let c = Array2::from_shape_fn((3, 4), |(i, j)| ((i as f64) - 1.3 * j as f64).abs() / 4.0);
    let problem = TransportProblem::from_arrays(mu, nu, c)?;
    let gamma = 1.0;

    let exact = exact_candidate(&problem, gamma)?;
    println!("exact plan:\n{:.6}", exact.solution.as_array());
    println!(
        "active cells: {}",
        exact.support.iter().filter(|&&s| s).count()
    );

    for alg in Algorithm::QUADRATIC {
        let config = SolverConfig::new(alg, gamma)
            .with_tol(1e-10)
            .with_history(false);
        let report = solve(&problem, &config)?;
        let gap = duality_gap(
            &report.final_potentials,
            &report.final_plan,
            &problem,
            gamma,
        );
        println!(
            "{:<18} {:>5} iterations  |pi - pi*| = {:.2e}  gap = {:.2e}",
            alg.name(),
            report.iterations,
            report.final_plan.max_abs_diff(&exact.solution),
            gap
        );
    }
    Ok(())
}
