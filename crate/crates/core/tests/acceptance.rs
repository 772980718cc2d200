//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ndarray::{Array1, Array2};
use qrot::dual::{
    dual_gradients, dual_objective, duality_gap, preconditioner_apply, preconditioner_matrix,
};
use qrot::io::{run_compare, ProblemFile, RunOptions};
use qrot::model::{primal_objective, Grid1D};
use qrot::oracle::exact_solve;
use qrot::problems::{default_benchmark, CostKind};
use qrot::regfun::{
    luxemburg_norm, marginal_contraction_check, GridFunction, ProductGridFunction, YoungFunction,
};
use qrot::solvers::{
    cyclic_projection_step, fixed_point_step, gradient_step, nesterov_step, solve,
    CyclicProjectionState, NesterovState,
};
use qrot::{Algorithm, DualPotentials, SolverConfig, TransportPlan, TransportProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const GAMMAS: [f64; 3] = [0.5, 1.0, 5.0];

struct Instance {
    problem: TransportProblem,
    gamma: f64,
    plan: TransportPlan,
    potentials: DualPotentials,
}

/// The 50 criterion-1 instances with their exact solutions.
fn oracle_instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    (0..50)
        .map(|k| {
            let n = rng.random_range(2..=4);
            let m = rng.random_range(2..=4);
            let problem = common::random_instance(&mut rng, n, m);
            let gamma = GAMMAS[k % GAMMAS.len()];
            let (plan, potentials) = exact_solve(&problem, gamma).expect("oracle solves");
            Instance {
                problem,
                gamma,
                plan,
                potentials,
            }
        })
        .collect()
}

fn quadratic_config(alg: Algorithm, gamma: f64) -> SolverConfig {
    SolverConfig::new(alg, gamma)
        .with_tol(1e-9)
        .with_max_iters(1_000_000)
        .with_history(false)
}

fn oracle_equivalence(instances: &[Instance]) -> (Check, Check) {
    let mut worst_plan = 0.0f64;
    let mut worst_gap = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    let mut gap_failures = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        for alg in Algorithm::QUADRATIC {
            let report = solve(&inst.problem, &quadratic_config(alg, inst.gamma)).unwrap();
            let d = report.final_plan.max_abs_diff(&inst.plan);
            worst_plan = worst_plan.max(d);
            if !report.converged || d > 1e-6 {
                failures.push(format!(
                    "#{k} {alg}: converged={} diff={d:.2e}",
                    report.converged
                ));
            }
            if report.converged {
                let gap = duality_gap(
                    &report.final_potentials,
                    &report.final_plan,
                    &inst.problem,
                    inst.gamma,
                );
                let primal = primal_objective(&report.final_plan, inst.problem.cost(), inst.gamma);
                let bound = 1e-8 * (1.0 + primal.abs());
                worst_gap = worst_gap.max(gap / (1.0 + primal.abs()));
                if gap > bound {
                    gap_failures.push(format!("#{k} {alg}: gap {gap:.2e} > {bound:.2e}"));
                }
            }
        }
    }
    let c1 = if failures.is_empty() {
        Ok(format!(
            "200 solves, worst plan difference {worst_plan:.2e} (limit 1e-6)"
        ))
    } else {
        Err(failures.join("; "))
    };
    let c2 = if gap_failures.is_empty() {
        Ok(format!(
            "worst gap / (1 + |primal|) {worst_gap:.2e} (limit 1e-8)"
        ))
    } else {
        Err(gap_failures.join("; "))
    };
    (c1, c2)
}

fn optimum_is_fixed_point(instances: &[Instance]) -> Check {
    let mut worst = 0.0f64;
    for inst in instances {
        let (p, g) = (&inst.problem, inst.gamma);
        let star = &inst.potentials;
        let (n, m) = p.dims();
        let tau = SolverConfig::new(Algorithm::DualGradient, g).stepsize(n, m);
        let moves = [
            cyclic_projection_step(&CyclicProjectionState::new(star.clone()), p, g)
                .potentials
                .max_abs_diff(star),
            gradient_step(star, p, g, tau).max_abs_diff(star),
            fixed_point_step(star, p, g).max_abs_diff(star),
            nesterov_step(&NesterovState::new(star.clone()), p, g, tau)
                .current
                .max_abs_diff(star),
        ];
        worst = moves.into_iter().fold(worst, f64::max);
    }
    if worst < 1e-10 {
        Ok(format!("largest move {worst:.2e} (limit 1e-10)"))
    } else {
        Err(format!("largest move {worst:.2e}"))
    }
}

fn gradient_correctness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 100 {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=6);
        let problem = common::random_instance(&mut rng, n, m);
        let gamma = rng.random_range(0.1..5.0);
        let ab = DualPotentials::new(
            (0..n).map(|_| rng.random_range(-1.0..1.5)).collect(),
            (0..m).map(|_| rng.random_range(-1.0..1.5)).collect(),
        );
        // off-kink: every cell at least 1e-4 away from the kink
        let c = problem.c();
        let off_kink =
            (0..n).all(|i| (0..m).all(|j| (ab.alpha[i] + ab.beta[j] - c[[i, j]]).abs() > 1e-4));
        if !off_kink {
            continue;
        }
        tested += 1;
        let (ga, gb) = dual_gradients(&ab, &problem, gamma);
        let analytic: Vec<f64> = ga.iter().chain(gb.iter()).copied().collect();
        let scale = analytic.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        for (k, &g) in analytic.iter().enumerate() {
            let bump = |s: f64| {
                let mut x = ab.clone();
                if k < n {
                    x.alpha[k] += s;
                } else {
                    x.beta[k - n] += s;
                }
                dual_objective(&x, &problem, gamma)
            };
            let fd = (bump(h) - bump(-h)) / (2.0 * h);
            let rel = (fd - g).abs() / scale;
            worst = worst.max(rel);
        }
    }
    if worst <= 1e-5 {
        Ok(format!(
            "100 points, worst relative error {worst:.2e} (limit 1e-5)"
        ))
    } else {
        Err(format!("worst relative error {worst:.2e}"))
    }
}

fn preconditioner_algebra() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=20 {
        for m in 1..=20 {
            let big_m = preconditioner_matrix(n, m);
            let mut product = Array2::<f64>::zeros((n + m, n + m));
            for k in 0..n + m {
                let mut e = Array1::<f64>::zeros(n + m);
                e[k] = 1.0;
                let (f, g) =
                    preconditioner_apply(e.slice(ndarray::s![..n]), e.slice(ndarray::s![n..]));
                let x = ndarray::concatenate![ndarray::Axis(0), f, g];
                product.column_mut(k).assign(&big_m.dot(&x));
            }
            let err = (&product - &Array2::<f64>::eye(n + m))
                .iter()
                .fold(0.0f64, |a, &b| a.max(b.abs()));
            worst = worst.max(err);
        }
    }
    if worst <= 1e-12 {
        Ok(format!(
            "N, M in 1..=20, worst entry error {worst:.2e} (limit 1e-12)"
        ))
    } else {
        Err(format!("worst entry error {worst:.2e}"))
    }
}

fn benchmark_ordering() -> Check {
    let problem = default_benchmark(100, CostKind::SquaredDistance).unwrap();
    let gamma = 10.0;
    let iters = |alg| {
        let config = SolverConfig::new(alg, gamma)
            .with_tol(1e-5)
            .with_max_iters(1_000_000)
            .with_history(false);
        let r = solve(&problem, &config).unwrap();
        assert!(r.converged, "{alg} did not reach 1e-5");
        r.iterations
    };
    let (a1, a2, a3) = (
        iters(Algorithm::CyclicProjection),
        iters(Algorithm::DualGradient),
        iters(Algorithm::FixedPoint),
    );
    let at_10k = |alg| {
        let config = SolverConfig::new(alg, gamma)
            .with_tol(1e-300)
            .with_max_iters(10_000)
            .with_history(false);
        solve(&problem, &config).unwrap().final_violation
    };
    let (v2, v4) = (at_10k(Algorithm::DualGradient), at_10k(Algorithm::Nesterov));
    let summary = format!(
        "iterations to 1e-5: alg3 {a3}, alg1 {a1}, alg2 {a2}; violation at 1e4: alg4 {v4:.2e}, alg2 {v2:.2e}"
    );
    if a3 <= a1 && a1 < a2 && v4 < v2 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn luxemburg_closed_forms() -> Check {
    let mut worst_closed = 0.0f64;
    for &cells in &[1usize, 7, 64, 1000] {
        let grid = Grid1D::new(cells, 0.0, 1.0).unwrap();
        let one = GridFunction::new(grid, Array1::ones(cells)).unwrap();
        let q = luxemburg_norm(&one, YoungFunction::Quadratic).unwrap();
        worst_closed = worst_closed.max((q - 0.5f64.sqrt()).abs());
        for p in [1.5, 2.0, 3.0, 7.5] {
            let v = luxemburg_norm(&one, YoungFunction::ppower(p).unwrap()).unwrap();
            worst_closed = worst_closed.max((v - p.powf(-1.0 / p)).abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_hom = 0.0f64;
    for _ in 0..50 {
        let cells = rng.random_range(1..40);
        let a = rng.random_range(-2.0..0.0);
        let grid = Grid1D::new(cells, a, a + rng.random_range(0.5..3.0)).unwrap();
        let f = GridFunction::new(
            grid,
            (0..cells).map(|_| rng.random_range(-3.0..3.0)).collect(),
        )
        .unwrap();
        let k = rng.random_range(0.01..100.0);
        for phi in [
            YoungFunction::Quadratic,
            YoungFunction::ppower(2.7).unwrap(),
            YoungFunction::Entropy,
        ] {
            let base = luxemburg_norm(&f, phi).unwrap();
            let scaled = luxemburg_norm(&f.scaled(k), phi).unwrap();
            worst_hom = worst_hom.max((scaled - k * base).abs() / (k * base));
        }
    }
    let summary = format!(
        "closed-form error {worst_closed:.2e} (1e-8), homogeneity error {worst_hom:.2e} (1e-8)"
    );
    if worst_closed <= 1e-8 && worst_hom <= 1e-8 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn marginal_contraction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..100 {
        let n = rng.random_range(1..30);
        let m = rng.random_range(1..30);
        let rows = Grid1D::new(n, 0.0, 1.0).unwrap();
        let cols = Grid1D::new(m, 0.0, 1.0).unwrap();
        let scale = 10f64.powf(rng.random_range(-2.0..2.0));
        let values = Array2::from_shape_fn((n, m), |_| {
            if rng.random_bool(0.3) {
                0.0
            } else {
                scale * rng.random_range(0.0..1.0)
            }
        });
        let pi = ProductGridFunction::new(rows, cols, values).unwrap();
        for phi in [YoungFunction::Quadratic, YoungFunction::Entropy] {
            if !marginal_contraction_check(&pi, phi).unwrap() {
                return Err(format!("plan #{k} violates the bound for {phi:?}"));
            }
        }
    }
    Ok("100 random plans, quadratic and entropy".into())
}

fn sinkhorn_baseline(instances: &[Instance]) -> Check {
    let mut distinct = 0.0f64;
    let mut count = 0;
    let mut worst_iters = 0;
    for (k, inst) in instances.iter().enumerate().filter(|(_, i)| i.gamma >= 1.0) {
        let config = SolverConfig::new(Algorithm::Sinkhorn, inst.gamma)
            .with_tol(1e-6)
            .with_max_iters(10_000)
            .with_history(false);
        let report = solve(&inst.problem, &config).unwrap();
        if !report.converged {
            return Err(format!("instance #{k} not converged in 1e4 iterations"));
        }
        count += 1;
        worst_iters = worst_iters.max(report.iterations);
        distinct = distinct.max(report.final_plan.max_abs_diff(&inst.plan));
    }
    let summary = format!(
        "{count} instances, at most {worst_iters} iterations, largest gap to quadratic plan {distinct:.3}"
    );
    if distinct > 0.0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("problem.toml");
    ProblemFile::benchmark(25, CostKind::SquaredDistance, 10.0)
        .save(&path)
        .unwrap();
    let options = RunOptions {
        tol: 1e-6,
        ..RunOptions::default()
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_compare(&path, &options, &a).map_err(|e| e.to_string())?;
    run_compare(&path, &options, &b).map_err(|e| e.to_string())?;
    for alg in Algorithm::QUADRATIC {
        let name = format!("{}.csv", alg.name());
        if common::csv_without_elapsed(&a.join(&name))
            != common::csv_without_elapsed(&b.join(&name))
        {
            return Err(format!("{name} differs between runs"));
        }
    }
    Ok("four CSVs identical apart from elapsed_ms".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let instances = oracle_instances();
    let (c1, c2) = oracle_equivalence(&instances);
    let results: Vec<(&str, Check)> = vec![
        ("1 oracle equivalence", c1),
        ("2 duality gap", c2),
        (
            "3 optimum is a fixed point",
            optimum_is_fixed_point(&instances),
        ),
        ("4 gradient correctness", gradient_correctness()),
        ("5 preconditioner algebra", preconditioner_algebra()),
        ("6 qualitative ordering", benchmark_ordering()),
        ("7 luxemburg norms", luxemburg_closed_forms()),
        ("8 marginal contraction", marginal_contraction()),
        ("9 sinkhorn baseline", sinkhorn_baseline(&instances)),
        ("10 cli determinism", cli_determinism()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
