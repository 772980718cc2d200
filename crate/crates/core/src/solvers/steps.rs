use ndarray::{Array1, Array2, ArrayView1};

use crate::dual::{neg, plan_marginals, preconditioner_apply};
use crate::model::{DualPotentials, TransportProblem};

/// Slack matrix and potentials of the cyclic projection method.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicProjectionState {
    /// `ρ = (α ⊕ β − c)₋`, always nonnegative.
    pub rho: Array2<f64>,
    pub potentials: DualPotentials,
}

impl CyclicProjectionState {
    pub fn new(potentials: DualPotentials) -> Self {
        let (n, m) = (potentials.alpha.len(), potentials.beta.len());
        Self {
            rho: Array2::zeros((n, m)),
            potentials,
        }
    }

    /// One sweep: solve for `ρ`, then `α`, then `β` (which sees the new `α`).
    pub fn step(&mut self, problem: &TransportProblem, gamma: f64) {
        let c = problem.c();
        let (n, m) = c.dim();
        let DualPotentials { alpha, beta } = &mut self.potentials;

        // ρ from the old potentials, fused with the row sums the α update needs
        for (i, (crow, mut rrow)) in c.outer_iter().zip(self.rho.outer_iter_mut()).enumerate() {
            let a = alpha[i];
            let mut acc = 0.0;
            for ((r, &cij), &b) in rrow.iter_mut().zip(crow.iter()).zip(beta.iter()) {
                *r = neg(a + b - cij);
                acc += *r + b - cij;
            }
            alpha[i] = (gamma * problem.mu()[i] - acc) / m as f64;
        }

        let mut col_acc = Array1::<f64>::zeros(m);
        for (i, (crow, rrow)) in c.outer_iter().zip(self.rho.outer_iter()).enumerate() {
            let a = alpha[i];
            for ((acc, &cij), &r) in col_acc.iter_mut().zip(crow.iter()).zip(rrow.iter()) {
                *acc += r + a - cij;
            }
        }
        for ((b, &nu), &acc) in beta.iter_mut().zip(problem.nu().iter()).zip(col_acc.iter()) {
            *b = (gamma * nu - acc) / n as f64;
        }
    }
}

/// Functional form of [`CyclicProjectionState::step`].
pub fn cyclic_projection_step(
    state: &CyclicProjectionState,
    problem: &TransportProblem,
    gamma: f64,
) -> CyclicProjectionState {
    let mut next = state.clone();
    next.step(problem, gamma);
    next
}

/// `α' = α − τγ(π1 − μ)`, `β' = β − τγ(πᵀ1 − ν)` with `π` from the old potentials.
pub fn gradient_step(
    ab: &DualPotentials,
    problem: &TransportProblem,
    gamma: f64,
    tau: f64,
) -> DualPotentials {
    let (rows, cols) = plan_marginals(ab.alpha.view(), ab.beta.view(), problem.c(), gamma);
    gradient_update(ab, rows.view(), cols.view(), problem, gamma, tau)
}

pub(crate) fn gradient_update(
    ab: &DualPotentials,
    rows: ArrayView1<f64>,
    cols: ArrayView1<f64>,
    problem: &TransportProblem,
    gamma: f64,
    tau: f64,
) -> DualPotentials {
    let s = tau * gamma;
    DualPotentials {
        alpha: &ab.alpha - &((&rows - problem.mu()) * s),
        beta: &ab.beta - &((&cols - problem.nu()) * s),
    }
}

/// Gradient step preconditioned by the closed-form inverse of the block matrix.
pub fn fixed_point_step(
    ab: &DualPotentials,
    problem: &TransportProblem,
    gamma: f64,
) -> DualPotentials {
    let (rows, cols) = plan_marginals(ab.alpha.view(), ab.beta.view(), problem.c(), gamma);
    fixed_point_update(ab, rows.view(), cols.view(), problem, gamma)
}

pub(crate) fn fixed_point_update(
    ab: &DualPotentials,
    rows: ArrayView1<f64>,
    cols: ArrayView1<f64>,
    problem: &TransportProblem,
    gamma: f64,
) -> DualPotentials {
    let f = (problem.mu() - &rows) * gamma;
    let g = (problem.nu() - &cols) * gamma;
    let (da, db) = preconditioner_apply(f.view(), g.view());
    DualPotentials {
        alpha: &ab.alpha + &da,
        beta: &ab.beta + &db,
    }
}

/// `σ_n = n / (n + 3)`.
pub fn nesterov_momentum(n: usize) -> f64 {
    n as f64 / (n as f64 + 3.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NesterovState {
    pub current: DualPotentials,
    pub previous: DualPotentials,
    pub n: usize,
}

impl NesterovState {
    /// Starts with `previous = current`, i.e. zero momentum.
    pub fn new(start: DualPotentials) -> Self {
        Self {
            previous: start.clone(),
            current: start,
            n: 0,
        }
    }

    pub fn step(&mut self, problem: &TransportProblem, gamma: f64, tau: f64) {
        let sigma = nesterov_momentum(self.n);
        let extrapolate = |x: &Array1<f64>, prev: &Array1<f64>| x + &((x - prev) * sigma);
        let bar = DualPotentials {
            alpha: extrapolate(&self.current.alpha, &self.previous.alpha),
            beta: extrapolate(&self.current.beta, &self.previous.beta),
        };
        let next = gradient_step(&bar, problem, gamma, tau);
        self.previous = std::mem::replace(&mut self.current, next);
        self.n += 1;
    }
}

/// Functional form of [`NesterovState::step`].
pub fn nesterov_step(
    state: &NesterovState,
    problem: &TransportProblem,
    gamma: f64,
    tau: f64,
) -> NesterovState {
    let mut next = state.clone();
    next.step(problem, gamma, tau);
    next
}
