//! Domain types shared by every solver: grids, measures, cost matrices,
//! transport plans and dual potentials, plus the elementary reductions
//! (marginals, constraint violation, primal objective).
//!
//! Measures are cell masses, so marginal constraints are plain vector sums.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{Error, Result};

/// Uniform cell-centered grid on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n: usize,
    a: f64,
    b: f64,
    points: Array1<f64>,
}

impl Grid1D {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("grid.n", "cell count must be positive"));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::invalid("grid", "endpoints must be finite"));
        }
        if a >= b {
            return Err(Error::invalid(
                "grid",
                format!("need a < b, got a = {a}, b = {b}"),
            ));
        }
        let h = (b - a) / n as f64;
        let points = Array1::from_shape_fn(n, |i| a + (i as f64 + 0.5) * h);
        Ok(Self { n, a, b, points })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    /// Cell width.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Length of the domain, `b - a`.
    pub fn extent(&self) -> f64 {
        self.b - self.a
    }

    /// Cell centers.
    pub fn points(&self) -> &Array1<f64> {
        &self.points
    }
}

/// Nonnegative cell masses, optionally attached to the grid they live on.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Array1<f64>,
    grid: Option<Grid1D>,
}

impl DiscreteMeasure {
    pub fn new(weights: Array1<f64>) -> Result<Self> {
        check_nonneg(weights.iter(), "measure weights")?;
        if weights.is_empty() {
            return Err(Error::invalid("measure", "must have at least one cell"));
        }
        Ok(Self {
            weights,
            grid: None,
        })
    }

    pub fn on_grid(grid: Grid1D, weights: Array1<f64>) -> Result<Self> {
        if grid.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                what: "measure weights vs grid",
                expected: grid.len(),
                got: weights.len(),
            });
        }
        let mut m = Self::new(weights)?;
        m.grid = Some(grid);
        Ok(m)
    }

    pub fn weights(&self) -> &Array1<f64> {
        &self.weights
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        self.grid.as_ref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.weights.sum()
    }
}

/// Dense `N x M` cost matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix(Array2<f64>);

impl CostMatrix {
    pub fn new(c: Array2<f64>) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "cost matrix",
            });
        }
        Ok(Self(c))
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.dim()
    }
}

/// Nonnegative `N x M` coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan(Array2<f64>);

impl TransportPlan {
    pub fn new(pi: Array2<f64>) -> Result<Self> {
        check_nonneg(pi.iter(), "transport plan")?;
        Ok(Self(pi))
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self(Array2::zeros((n, m)))
    }

    /// Wraps a matrix already known to be nonnegative.
    pub(crate) fn from_nonneg(pi: Array2<f64>) -> Self {
        debug_assert!(pi.iter().all(|&x| x >= 0.0));
        Self(pi)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.dim()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &TransportPlan) -> f64 {
        assert_eq!(self.shape(), other.shape(), "plan shapes differ");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
    }
}

/// Dual vectors `(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotentials {
    pub alpha: Array1<f64>,
    pub beta: Array1<f64>,
}

impl DualPotentials {
    pub fn new(alpha: Array1<f64>, beta: Array1<f64>) -> Self {
        Self { alpha, beta }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            alpha: Array1::zeros(n),
            beta: Array1::zeros(m),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.alpha
            .iter()
            .chain(self.beta.iter())
            .all(|x| x.is_finite())
    }

    /// Moves along the gauge direction `(alpha + s, beta - s)`.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            alpha: &self.alpha + s,
            beta: &self.beta - s,
        }
    }

    /// Infinity-norm distance over both vectors.
    pub fn max_abs_diff(&self, other: &DualPotentials) -> f64 {
        self.alpha
            .iter()
            .zip(other.alpha.iter())
            .chain(self.beta.iter().zip(other.beta.iter()))
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
    }
}

/// A mass-balanced transport instance: two marginals and a cost.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    cost: CostMatrix,
}

/// Relative tolerance for the mass balance check.
pub const MASS_BALANCE_RTOL: f64 = 1e-12;

impl TransportProblem {
    pub fn new(mu: DiscreteMeasure, nu: DiscreteMeasure, cost: CostMatrix) -> Result<Self> {
        let (n, m) = cost.shape();
        if mu.len() != n {
            return Err(Error::DimensionMismatch {
                what: "cost rows vs mu",
                expected: mu.len(),
                got: n,
            });
        }
        if nu.len() != m {
            return Err(Error::DimensionMismatch {
                what: "cost columns vs nu",
                expected: nu.len(),
                got: m,
            });
        }
        let (a, b) = (mu.mass(), nu.mass());
        if (a - b).abs() > MASS_BALANCE_RTOL * a.max(b) {
            return Err(Error::MassMismatch { mu: a, nu: b });
        }
        Ok(Self { mu, nu, cost })
    }

    /// Convenience constructor from raw arrays.
    pub fn from_arrays(mu: Array1<f64>, nu: Array1<f64>, cost: Array2<f64>) -> Result<Self> {
        Self::new(
            DiscreteMeasure::new(mu)?,
            DiscreteMeasure::new(nu)?,
            CostMatrix::new(cost)?,
        )
    }

    pub fn mu(&self) -> &Array1<f64> {
        self.mu.weights()
    }

    pub fn nu(&self) -> &Array1<f64> {
        self.nu.weights()
    }

    pub fn source(&self) -> &DiscreteMeasure {
        &self.mu
    }

    pub fn target(&self) -> &DiscreteMeasure {
        &self.nu
    }

    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    pub fn c(&self) -> &Array2<f64> {
        self.cost.as_array()
    }

    /// `(N, M)`.
    pub fn dims(&self) -> (usize, usize) {
        self.cost.shape()
    }
}

fn check_nonneg<'a>(values: impl Iterator<Item = &'a f64>, what: &'static str) -> Result<()> {
    for &x in values {
        if !x.is_finite() {
            return Err(Error::NonFinite { what });
        }
        if x < 0.0 {
            return Err(Error::Negative { what });
        }
    }
    Ok(())
}

/// Row and column sums of a plan.
pub fn marginals(pi: &TransportPlan) -> (Array1<f64>, Array1<f64>) {
    let p = pi.as_array();
    (p.sum_axis(Axis(1)), p.sum_axis(Axis(0)))
}

/// `max(|pi 1 - mu|_inf, |pi^T 1 - nu|_inf)`.
pub fn max_violation(
    pi: &TransportPlan,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Result<f64> {
    let (n, m) = pi.shape();
    if mu.len() != n {
        return Err(Error::DimensionMismatch {
            what: "plan rows vs mu",
            expected: mu.len(),
            got: n,
        });
    }
    if nu.len() != m {
        return Err(Error::DimensionMismatch {
            what: "plan columns vs nu",
            expected: nu.len(),
            got: m,
        });
    }
    let (rows, cols) = marginals(pi);
    Ok(violation_from_marginals(
        rows.view(),
        cols.view(),
        mu.weights().view(),
        nu.weights().view(),
    ))
}

pub(crate) fn violation_from_marginals(
    rows: ArrayView1<f64>,
    cols: ArrayView1<f64>,
    mu: ArrayView1<f64>,
    nu: ArrayView1<f64>,
) -> f64 {
    let dev = |x: ArrayView1<f64>, y: ArrayView1<f64>| {
        x.iter()
            .zip(y.iter())
            .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
    };
    dev(rows, mu).max(dev(cols, nu))
}

/// `sum c_ij pi_ij + (gamma / 2) sum pi_ij^2`.
pub fn primal_objective(pi: &TransportPlan, c: &CostMatrix, gamma: f64) -> f64 {
    assert_eq!(pi.shape(), c.shape(), "plan and cost shapes differ");
    pi.as_array()
        .iter()
        .zip(c.as_array().iter())
        .map(|(&p, &cij)| cij * p + 0.5 * gamma * p * p)
        .sum()
}
