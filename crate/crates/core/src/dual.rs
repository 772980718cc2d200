//! Dual objective of the quadratically regularized problem, its gradients,
//! plan recovery `π = (α ⊕ β − c)₊ / γ`, the duality gap, and the Hessian
//! and diagonal-block preconditioner used by the fixed-point iteration.
//!
//! The dual is invariant under `(α + s, β − s)`; nothing here fixes a gauge.

use ndarray::{Array1, Array2, ArrayView1, Zip};

use crate::error::{Error, Result};
use crate::model::{primal_objective, CostMatrix, DualPotentials, TransportPlan, TransportProblem};
use crate::regfun::YoungFunction;

#[inline]
pub(crate) fn pos(x: f64) -> f64 {
    x.max(0.0)
}

#[inline]
pub(crate) fn neg(x: f64) -> f64 {
    (-x).max(0.0)
}

/// `π_ij = max(α_i + β_j − c_ij, 0) / γ`.
pub fn recover_plan(ab: &DualPotentials, c: &CostMatrix, gamma: f64) -> TransportPlan {
    let c = c.as_array();
    let mut pi = Array2::zeros(c.dim());
    Zip::indexed(&mut pi).and(c).for_each(|(i, j), p, &cij| {
        *p = pos(ab.alpha[i] + ab.beta[j] - cij) / gamma;
    });
    TransportPlan::from_nonneg(pi)
}

/// Row and column sums of the recovered plan, without materializing it.
pub fn plan_marginals(
    alpha: ArrayView1<f64>,
    beta: ArrayView1<f64>,
    c: &Array2<f64>,
    gamma: f64,
) -> (Array1<f64>, Array1<f64>) {
    let (n, m) = c.dim();
    let mut rows = Array1::zeros(n);
    let mut cols = Array1::zeros(m);
    let inv = 1.0 / gamma;
    for (i, crow) in c.outer_iter().enumerate() {
        let a = alpha[i];
        let mut acc = 0.0;
        for ((col, &cij), &b) in cols.iter_mut().zip(crow.iter()).zip(beta.iter()) {
            let p = pos(a + b - cij) * inv;
            acc += p;
            *col += p;
        }
        rows[i] = acc;
    }
    (rows, cols)
}

/// `F(α, β) = ½‖(α ⊕ β − c)₊‖² − γ⟨α, μ⟩ − γ⟨β, ν⟩`, to be minimized.
pub fn dual_objective(ab: &DualPotentials, problem: &TransportProblem, gamma: f64) -> f64 {
    let c = problem.c();
    let mut quad = 0.0;
    for (i, crow) in c.outer_iter().enumerate() {
        for (j, &cij) in crow.iter().enumerate() {
            let x = pos(ab.alpha[i] + ab.beta[j] - cij);
            quad += x * x;
        }
    }
    0.5 * quad - gamma * ab.alpha.dot(problem.mu()) - gamma * ab.beta.dot(problem.nu())
}

/// Concave dual value `⟨α, μ⟩ + ⟨β, ν⟩ − γ Σ Φ̃*((α ⊕ β − c) / γ)`.
///
/// For the quadratic regularizer this equals `−F / γ`.
pub fn dual_value(
    ab: &DualPotentials,
    problem: &TransportProblem,
    gamma: f64,
    phi: YoungFunction,
) -> f64 {
    let c = problem.c();
    let mut penalty = 0.0;
    for (i, crow) in c.outer_iter().enumerate() {
        for (j, &cij) in crow.iter().enumerate() {
            penalty += phi.conjugate_nonneg((ab.alpha[i] + ab.beta[j] - cij) / gamma);
        }
    }
    ab.alpha.dot(problem.mu()) + ab.beta.dot(problem.nu()) - gamma * penalty
}

/// `(γ(π1 − μ), γ(πᵀ1 − ν))` with `π = recover_plan(ab)`.
pub fn dual_gradients(
    ab: &DualPotentials,
    problem: &TransportProblem,
    gamma: f64,
) -> (Array1<f64>, Array1<f64>) {
    let (rows, cols) = plan_marginals(ab.alpha.view(), ab.beta.view(), problem.c(), gamma);
    ((rows - problem.mu()) * gamma, (cols - problem.nu()) * gamma)
}

/// Primal objective of `pi` minus the concave dual value of `ab`.
pub fn duality_gap(
    ab: &DualPotentials,
    pi: &TransportPlan,
    problem: &TransportProblem,
    gamma: f64,
) -> f64 {
    primal_objective(pi, problem.cost(), gamma)
        - dual_value(ab, problem, gamma, YoungFunction::Quadratic)
}

/// Applies the closed-form inverse of the block preconditioner
/// `diag(M(I + J/N), N(I + J/M))`.
pub fn preconditioner_apply(f: ArrayView1<f64>, g: ArrayView1<f64>) -> (Array1<f64>, Array1<f64>) {
    let (n, m) = (f.len() as f64, g.len() as f64);
    let f_shift = f.sum() / (2.0 * n);
    let g_shift = g.sum() / (2.0 * m);
    (f.mapv(|x| (x - f_shift) / m), g.mapv(|x| (x - g_shift) / n))
}

/// The explicit `(N+M) x (N+M)` preconditioner matrix.
pub fn preconditioner_matrix(n: usize, m: usize) -> Array2<f64> {
    let (nf, mf) = (n as f64, m as f64);
    let mut out = Array2::zeros((n + m, n + m));
    for i in 0..n {
        for k in 0..n {
            out[[i, k]] = mf * (f64::from(u8::from(i == k)) + 1.0 / nf);
        }
    }
    for j in 0..m {
        for k in 0..m {
            out[[n + j, n + k]] = nf * (f64::from(u8::from(j == k)) + 1.0 / mf);
        }
    }
    out
}

/// `σ_ij = (α_i + β_j − c_ij >= 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMask(Array2<bool>);

impl SupportMask {
    pub fn new(sigma: Array2<bool>) -> Self {
        Self(sigma)
    }

    pub fn from_potentials(ab: &DualPotentials, c: &CostMatrix) -> Self {
        let c = c.as_array();
        let mut sigma = Array2::from_elem(c.dim(), false);
        Zip::indexed(&mut sigma).and(c).for_each(|(i, j), s, &cij| {
            *s = ab.alpha[i] + ab.beta[j] - cij >= 0.0;
        });
        Self(sigma)
    }

    pub fn as_array(&self) -> &Array2<bool> {
        &self.0
    }
}

/// Largest `N + M` for which [`build_hessian`] will materialize the matrix.
pub const HESSIAN_SIZE_LIMIT: usize = 200;

/// Generalized Hessian `[[diag(σ1), σ], [σᵀ, diag(σᵀ1)]]`.
pub fn build_hessian(mask: &SupportMask) -> Result<Array2<f64>> {
    let sigma = mask.as_array();
    let (n, m) = sigma.dim();
    if n + m > HESSIAN_SIZE_LIMIT {
        return Err(Error::TooLarge {
            what: "N + M",
            size: n + m,
            limit: HESSIAN_SIZE_LIMIT,
        });
    }
    let mut g = Array2::zeros((n + m, n + m));
    for ((i, j), &s) in sigma.indexed_iter() {
        if s {
            g[[i, i]] += 1.0;
            g[[n + j, n + j]] += 1.0;
            g[[i, n + j]] = 1.0;
            g[[n + j, i]] = 1.0;
        }
    }
    Ok(g)
}

/// Potentials together with a lazily recovered plan.
#[derive(Debug, Clone)]
pub struct DualState {
    potentials: DualPotentials,
    plan_cache: Option<TransportPlan>,
}

impl DualState {
    pub fn new(potentials: DualPotentials) -> Self {
        Self {
            potentials,
            plan_cache: None,
        }
    }

    pub fn potentials(&self) -> &DualPotentials {
        &self.potentials
    }

    pub fn set_potentials(&mut self, potentials: DualPotentials) {
        self.potentials = potentials;
        self.plan_cache = None;
    }

    pub fn plan(&mut self, c: &CostMatrix, gamma: f64) -> &TransportPlan {
        let potentials = &self.potentials;
        self.plan_cache
            .get_or_insert_with(|| recover_plan(potentials, c, gamma))
    }
}
