use std::time::{Duration, Instant};

use ndarray::{Array1, Array2};

use super::sinkhorn::{gibbs_kernel, sinkhorn_plan, sinkhorn_step};
use super::steps::{fixed_point_update, gradient_update, CyclicProjectionState, NesterovState};
use super::{Algorithm, ConvergenceReport, HistoryEntry, SolverConfig};
use crate::dual::{dual_value, plan_marginals, pos, recover_plan};
use crate::error::{Error, Result};
use crate::model::{violation_from_marginals, DualPotentials, TransportPlan, TransportProblem};
use crate::regfun::YoungFunction;

/// Runs the configured algorithm from `α = β = 0` (Sinkhorn: `u = v = 1`).
pub fn solve(problem: &TransportProblem, config: &SolverConfig) -> Result<ConvergenceReport> {
    let (n, m) = problem.dims();
    solve_from(problem, config, DualPotentials::zeros(n, m))
}

/// Like [`solve`], from given starting potentials. For Sinkhorn the start
/// is mapped to scalings `u = exp(α/γ)`, `v = exp(β/γ)`.
pub fn solve_from(
    problem: &TransportProblem,
    config: &SolverConfig,
    start: DualPotentials,
) -> Result<ConvergenceReport> {
    config.validate()?;
    let (n, m) = problem.dims();
    if start.alpha.len() != n || start.beta.len() != m {
        return Err(Error::DimensionMismatch {
            what: "starting potentials",
            expected: n + m,
            got: start.alpha.len() + start.beta.len(),
        });
    }
    if !start.is_finite() {
        return Err(Error::NonFinite {
            what: "starting potentials",
        });
    }
    match config.algorithm {
        Algorithm::Sinkhorn => run_sinkhorn(problem, config, start),
        alg => run_quadratic(problem, config, alg, start),
    }
}

enum DualIterate {
    Cyclic(CyclicProjectionState),
    Gradient(DualPotentials),
    FixedPoint(DualPotentials),
    Nesterov(NesterovState),
}

impl DualIterate {
    fn new(alg: Algorithm, start: DualPotentials) -> Self {
        match alg {
            Algorithm::CyclicProjection => DualIterate::Cyclic(CyclicProjectionState::new(start)),
            Algorithm::DualGradient => DualIterate::Gradient(start),
            Algorithm::FixedPoint => DualIterate::FixedPoint(start),
            Algorithm::Nesterov => DualIterate::Nesterov(NesterovState::new(start)),
            Algorithm::Sinkhorn => unreachable!("sinkhorn has its own loop"),
        }
    }

    fn potentials(&self) -> &DualPotentials {
        match self {
            DualIterate::Cyclic(st) => &st.potentials,
            DualIterate::Gradient(ab) | DualIterate::FixedPoint(ab) => ab,
            DualIterate::Nesterov(st) => &st.current,
        }
    }

    /// `marginals` are the plan marginals at the current potentials.
    fn advance(
        &mut self,
        marginals: &(Array1<f64>, Array1<f64>),
        problem: &TransportProblem,
        gamma: f64,
        tau: f64,
    ) {
        let (rows, cols) = (marginals.0.view(), marginals.1.view());
        match self {
            DualIterate::Cyclic(st) => st.step(problem, gamma),
            DualIterate::Gradient(ab) => *ab = gradient_update(ab, rows, cols, problem, gamma, tau),
            DualIterate::FixedPoint(ab) => *ab = fixed_point_update(ab, rows, cols, problem, gamma),
            DualIterate::Nesterov(st) => st.step(problem, gamma, tau),
        }
    }
}

struct Recorder {
    enabled: bool,
    stride: usize,
    history: Vec<HistoryEntry>,
    started: Instant,
}

impl Recorder {
    fn new(config: &SolverConfig) -> Self {
        Self {
            enabled: config.record_history,
            stride: config.history_stride,
            history: Vec::new(),
            started: Instant::now(),
        }
    }

    fn wants(&self, iteration: usize, last: bool) -> bool {
        self.enabled && (last || iteration.is_multiple_of(self.stride))
    }

    fn push(&mut self, iteration: usize, max_violation: f64, primal: f64, dual: f64) {
        self.history.push(HistoryEntry {
            iteration,
            max_violation,
            dual_objective: dual,
            primal_objective: primal,
            duality_gap: primal - dual,
            elapsed: self.started.elapsed(),
        });
    }

    fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// Primal objective of the recovered plan and the concave dual value.
fn quadratic_objectives(ab: &DualPotentials, problem: &TransportProblem, gamma: f64) -> (f64, f64) {
    let c = problem.c();
    let (mut primal, mut penalty) = (0.0, 0.0);
    for (i, crow) in c.outer_iter().enumerate() {
        for (j, &cij) in crow.iter().enumerate() {
            let p = pos(ab.alpha[i] + ab.beta[j] - cij) / gamma;
            primal += cij * p + 0.5 * gamma * p * p;
            penalty += 0.5 * p * p;
        }
    }
    let dual = ab.alpha.dot(problem.mu()) + ab.beta.dot(problem.nu()) - gamma * penalty;
    (primal, dual)
}

fn run_quadratic(
    problem: &TransportProblem,
    config: &SolverConfig,
    alg: Algorithm,
    start: DualPotentials,
) -> Result<ConvergenceReport> {
    let (n, m) = problem.dims();
    let gamma = config.gamma;
    let tau = config.stepsize(n, m);
    let c = problem.c();
    let mu = problem.mu().view();
    let nu = problem.nu().view();

    let mut recorder = Recorder::new(config);
    let mut iterate = DualIterate::new(alg, start);
    let ab = iterate.potentials();
    let mut marg = plan_marginals(ab.alpha.view(), ab.beta.view(), c, gamma);

    let mut iterations = 0;
    let mut violation = f64::INFINITY;
    let mut converged = false;
    for k in 1..=config.max_iters {
        iterate.advance(&marg, problem, gamma, tau);
        iterations = k;
        let ab = iterate.potentials();
        if !ab.is_finite() {
            return Err(Error::Divergence {
                algorithm: alg,
                iteration: k,
            });
        }
        marg = plan_marginals(ab.alpha.view(), ab.beta.view(), c, gamma);
        violation = violation_from_marginals(marg.0.view(), marg.1.view(), mu, nu);
        converged = violation <= config.tol;
        let last = converged || k == config.max_iters;
        if recorder.wants(k, last) {
            let (primal, dual) = quadratic_objectives(ab, problem, gamma);
            recorder.push(k, violation, primal, dual);
        }
        if converged {
            break;
        }
    }

    let final_potentials = iterate.potentials().clone();
    let final_plan = recover_plan(&final_potentials, problem.cost(), gamma);
    Ok(ConvergenceReport {
        algorithm: alg,
        iterations,
        converged,
        final_violation: violation,
        final_plan,
        final_potentials,
        elapsed: recorder.elapsed(),
        history: recorder.history,
    })
}

fn sinkhorn_objectives(
    pi: &TransportPlan,
    ab: &DualPotentials,
    problem: &TransportProblem,
    gamma: f64,
) -> (f64, f64) {
    let primal: f64 = pi
        .as_array()
        .iter()
        .zip(problem.c().iter())
        .map(|(&p, &cij)| cij * p + gamma * YoungFunction::Entropy.value(p))
        .sum();
    // π = exp((α ⊕ β − c)/γ) is the conjugate maximizer for α shifted by γ
    let shifted = DualPotentials::new(&ab.alpha + gamma, ab.beta.clone());
    let dual = dual_value(&shifted, problem, gamma, YoungFunction::Entropy);
    (primal, dual)
}

fn run_sinkhorn(
    problem: &TransportProblem,
    config: &SolverConfig,
    start: DualPotentials,
) -> Result<ConvergenceReport> {
    let gamma = config.gamma;
    let kernel: Array2<f64> = gibbs_kernel(problem.cost(), gamma);
    let mu = problem.mu().view();
    let nu = problem.nu().view();
    let mut u = start.alpha.mapv(|a| (a / gamma).exp());
    let mut v = start.beta.mapv(|b| (b / gamma).exp());

    let mut recorder = Recorder::new(config);
    let mut iterations = 0;
    let mut violation = f64::INFINITY;
    let mut converged = false;
    let mut plan = sinkhorn_plan(u.view(), v.view(), &kernel);
    for k in 1..=config.max_iters {
        let (u_next, v_next) = sinkhorn_step(u.view(), v.view(), &kernel, mu, nu)
            .map_err(|_| Error::SinkhornUnderflow { iteration: k })?;
        u = u_next;
        v = v_next;
        iterations = k;
        plan = sinkhorn_plan(u.view(), v.view(), &kernel);
        let (rows, cols) = crate::model::marginals(&plan);
        violation = violation_from_marginals(rows.view(), cols.view(), mu, nu);
        converged = violation <= config.tol;
        let last = converged || k == config.max_iters;
        if recorder.wants(k, last) {
            let ab = scalings_to_potentials(&u, &v, gamma);
            let (primal, dual) = sinkhorn_objectives(&plan, &ab, problem, gamma);
            recorder.push(k, violation, primal, dual);
        }
        if converged {
            break;
        }
    }

    Ok(ConvergenceReport {
        algorithm: Algorithm::Sinkhorn,
        iterations,
        converged,
        final_violation: violation,
        final_plan: plan,
        final_potentials: scalings_to_potentials(&u, &v, gamma),
        elapsed: recorder.elapsed(),
        history: recorder.history,
    })
}

fn scalings_to_potentials(u: &Array1<f64>, v: &Array1<f64>, gamma: f64) -> DualPotentials {
    DualPotentials::new(u.mapv(|x| gamma * x.ln()), v.mapv(|x| gamma * x.ln()))
}
