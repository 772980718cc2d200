//! Contrasts the entropic (Sinkhorn) and quadratic plans on one benchmark:
//! the quadratic plan has exact zeros, the entropic one is positive everywhere.

use qrot::problems::{default_benchmark, CostKind};
use qrot::solvers::{solve, Algorithm, SolverConfig};

fn main() -> qrot::Result<()> {
    let problem = default_benchmark(60, CostKind::SquaredDistance)?;
    // comparable blur: the quadratic weight is much larger than the entropic one
    let runs = [(Algorithm::Sinkhorn, 0.01), (Algorithm::Nesterov, 10.0)];
    for (alg, gamma) in runs {
        let config = SolverConfig::new(alg, gamma)
            .with_tol(1e-7)
            .with_history(false);
        let report = solve(&problem, &config)?;
        let pi = report.final_plan.as_array();
        let zeros = pi.iter().filter(|&&p| p == 0.0).count();
        println!(
            "{:<10} gamma = {gamma:<5} iterations = {:>6}  exact zeros: {:>5} of {}  largest entry {:.4e}",
            alg.name(),
            report.iterations,
            zeros,
            pi.len(),
            pi.fold(0.0f64, |a, &b| a.max(b))
        );
    }
    Ok(())
}
