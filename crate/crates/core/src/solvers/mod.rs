//! Iterative dual solvers: cyclic projection, dual gradient descent, the
//! preconditioned fixed-point iteration, Nesterov's accelerated gradient,
//! and the entropic Sinkhorn baseline, behind one driver.

mod driver;
mod sinkhorn;
mod steps;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::model::{DualPotentials, TransportPlan};

pub use driver::{solve, solve_from};
pub use sinkhorn::{gibbs_kernel, sinkhorn_plan, sinkhorn_step};
pub use steps::{
    cyclic_projection_step, fixed_point_step, gradient_step, nesterov_momentum, nesterov_step,
    CyclicProjectionState, NesterovState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    CyclicProjection,
    DualGradient,
    FixedPoint,
    Nesterov,
    Sinkhorn,
}

impl Algorithm {
    /// The four quadratic-regularization methods, in listing order.
    pub const QUADRATIC: [Algorithm; 4] = [
        Algorithm::CyclicProjection,
        Algorithm::DualGradient,
        Algorithm::FixedPoint,
        Algorithm::Nesterov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CyclicProjection => "cyclic-projection",
            Algorithm::DualGradient => "dual-gradient",
            Algorithm::FixedPoint => "fixed-point",
            Algorithm::Nesterov => "nesterov",
            Algorithm::Sinkhorn => "sinkhorn",
        }
    }

    pub fn is_quadratic(self) -> bool {
        self != Algorithm::Sinkhorn
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alg = match s {
            "cyclic-projection" | "cyclic" => Algorithm::CyclicProjection,
            "dual-gradient" | "gradient" => Algorithm::DualGradient,
            "fixed-point" => Algorithm::FixedPoint,
            "nesterov" => Algorithm::Nesterov,
            "sinkhorn" => Algorithm::Sinkhorn,
            other => {
                return Err(Error::invalid(
                    "algorithm",
                    format!(
                        "unknown algorithm {other:?} (expected cyclic-projection, \
                         dual-gradient, fixed-point, nesterov or sinkhorn)"
                    ),
                ))
            }
        };
        Ok(alg)
    }
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Regularization weight; for Sinkhorn the entropic weight.
    pub gamma: f64,
    /// Stop once the maximal marginal violation is at most this.
    pub tol: f64,
    pub max_iters: usize,
    pub record_history: bool,
    /// Record every `history_stride`-th iteration (the last one always).
    pub history_stride: usize,
    /// Stepsize for dual gradient and Nesterov; `None` means `1 / (N + M)`.
    pub tau: Option<f64>,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, gamma: f64) -> Self {
        Self {
            algorithm,
            gamma,
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            record_history: true,
            history_stride: 1,
            tau: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_history(mut self, record: bool) -> Self {
        self.record_history = record;
        self
    }

    pub fn with_history_stride(mut self, stride: usize) -> Self {
        self.history_stride = stride;
        self
    }

    pub fn with_tau(mut self, tau: Option<f64>) -> Self {
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid(
                "gamma",
                format!("must be positive, got {}", self.gamma),
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::invalid(
                "tol",
                format!("must be positive, got {}", self.tol),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        if self.history_stride == 0 {
            return Err(Error::invalid("history_stride", "must be at least 1"));
        }
        if let Some(tau) = self.tau {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(Error::invalid(
                    "tau",
                    format!("must be positive, got {tau}"),
                ));
            }
        }
        Ok(())
    }

    /// Stepsize actually used on an `n x m` instance.
    pub fn stepsize(&self, n: usize, m: usize) -> f64 {
        self.tau.unwrap_or(1.0 / (n + m) as f64)
    }
}

/// One recorded iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub max_violation: f64,
    /// Concave dual value, so that `duality_gap = primal - dual`.
    pub dual_objective: f64,
    pub primal_objective: f64,
    pub duality_gap: f64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub converged: bool,
    pub final_violation: f64,
    pub final_plan: TransportPlan,
    pub final_potentials: DualPotentials,
    pub history: Vec<HistoryEntry>,
    pub elapsed: Duration,
}
