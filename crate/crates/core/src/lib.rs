//! Dual solvers for discrete quadratically regularized optimal transport.
//!
//! Given marginals `μ ∈ ℝᴺ`, `ν ∈ ℝᴹ` of equal mass and a cost `c`, the crate
//! solves
//!
//! ```text
//! min  Σ c_ij π_ij + (γ/2) ‖π‖²   over  π >= 0,  π1 = μ,  πᵀ1 = ν
//! ```
//!
//! through its dual, where the optimal plan is `π = (α ⊕ β − c)₊ / γ`.
//! Four low-cost dual methods are provided (cyclic projection, dual gradient
//! descent, a preconditioned fixed-point iteration, Nesterov acceleration),
//! plus an entropic Sinkhorn baseline, an exact active-set oracle for tiny
//! instances, Young's-function and Luxemburg-norm utilities, benchmark
//! generators and CSV/SVG output.
//!
//! ```
//! use qrot::problems::{default_benchmark, CostKind};
//! use qrot::solvers::{solve, Algorithm, SolverConfig};
//!
//! let problem = default_benchmark(20, CostKind::SquaredDistance).unwrap();
//! let config = SolverConfig::new(Algorithm::FixedPoint, 10.0).with_tol(1e-8);
//! let report = solve(&problem, &config).unwrap();
//! assert!(report.converged);
//! ```

pub mod dual;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod problems;
pub mod regfun;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{
    CostMatrix, DiscreteMeasure, DualPotentials, Grid1D, TransportPlan, TransportProblem,
};
pub use solvers::{solve, Algorithm, ConvergenceReport, SolverConfig};
