//! Exact solutions of tiny instances by enumerating support patterns.
//!
//! For a fixed support `S`, stationarity `γ π_ij = α_i + β_j − c_ij` on `S`
//! together with the marginal constraints is linear in `(α, β)`. A candidate
//! is accepted when its plan is nonnegative on `S` and `α_i + β_j <= c_ij`
//! off `S`; by strict convexity the accepted plan is the unique optimum.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::model::{DualPotentials, TransportPlan, TransportProblem};

/// Largest `N · M` the enumeration accepts.
pub const MAX_CELLS: usize = 16;
/// Feasibility slack for sign conditions and the linear residual.
pub const KKT_TOL: f64 = 1e-12;

/// A support pattern with its plan and multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetCandidate {
    pub support: Array2<bool>,
    pub solution: TransportPlan,
    pub multipliers: DualPotentials,
}

/// Returns the optimal plan and potentials normalized to `mean(β) = 0`.
pub fn exact_solve(
    problem: &TransportProblem,
    gamma: f64,
) -> Result<(TransportPlan, DualPotentials)> {
    let candidate = exact_candidate(problem, gamma)?;
    Ok((candidate.solution, candidate.multipliers))
}

pub fn exact_candidate(problem: &TransportProblem, gamma: f64) -> Result<ActiveSetCandidate> {
    let (n, m) = problem.dims();
    let cells = n * m;
    if cells > MAX_CELLS {
        return Err(Error::TooLarge {
            what: "N * M",
            size: cells,
            limit: MAX_CELLS,
        });
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::invalid(
            "gamma",
            format!("must be positive, got {gamma}"),
        ));
    }
    if problem
        .mu()
        .iter()
        .chain(problem.nu().iter())
        .any(|&w| w <= 0.0)
    {
        return Err(Error::invalid(
            "marginals",
            "the oracle needs strictly positive marginals",
        ));
    }

    for pattern in enumeration_order(n, m) {
        if let Some(candidate) = try_support(problem, gamma, pattern) {
            return Ok(candidate);
        }
    }
    Err(Error::NoCandidate)
}

/// Bit `i * m + j` set means cell `(i, j)` is in the support.
fn covers_rows_and_columns(pattern: u32, n: usize, m: usize) -> bool {
    let row_ok = (0..n).all(|i| (0..m).any(|j| pattern >> (i * m + j) & 1 == 1));
    let col_ok = (0..m).all(|j| (0..n).any(|i| pattern >> (i * m + j) & 1 == 1));
    row_ok && col_ok
}

/// Densest patterns first, ties broken lexicographically on the row-major
/// cell sequence with `true` ordered before `false`.
fn enumeration_order(n: usize, m: usize) -> Vec<u32> {
    let cells = n * m;
    let mut patterns: Vec<u32> = (0..(1u32 << cells))
        .filter(|&p| covers_rows_and_columns(p, n, m))
        .collect();
    // reversing the bits puts cell (0, 0) in the most significant position
    let lex_key = |p: u32| p.reverse_bits() >> (32 - cells);
    patterns.sort_by_key(|&p| {
        (
            std::cmp::Reverse(p.count_ones()),
            std::cmp::Reverse(lex_key(p)),
        )
    });
    patterns
}

fn try_support(problem: &TransportProblem, gamma: f64, pattern: u32) -> Option<ActiveSetCandidate> {
    let (n, m) = problem.dims();
    let c = problem.c();
    let on = |i: usize, j: usize| pattern >> (i * m + j) & 1 == 1;

    // rows: N row-sum equations, M column-sum equations, one gauge row
    let unknowns = n + m;
    let mut a = DMatrix::<f64>::zeros(unknowns + 1, unknowns);
    let mut rhs = DVector::<f64>::zeros(unknowns + 1);
    for i in 0..n {
        rhs[i] = gamma * problem.mu()[i];
        for j in (0..m).filter(|&j| on(i, j)) {
            a[(i, i)] += 1.0;
            a[(i, n + j)] += 1.0;
            rhs[i] += c[[i, j]];
        }
    }
    for j in 0..m {
        let r = n + j;
        rhs[r] = gamma * problem.nu()[j];
        for i in (0..n).filter(|&i| on(i, j)) {
            a[(r, i)] += 1.0;
            a[(r, n + j)] += 1.0;
            rhs[r] += c[[i, j]];
        }
    }
    for j in 0..m {
        a[(unknowns, n + j)] = 1.0;
    }

    let x = a.clone().svd(true, true).solve(&rhs, 1e-13).ok()?;
    let residual = (&a * &x - &rhs).amax();
    if residual > KKT_TOL.max(1e-12 * rhs.amax()) * 10.0 {
        return None;
    }

    let alpha = Array1::from_iter((0..n).map(|i| x[i]));
    let beta = Array1::from_iter((0..m).map(|j| x[n + j]));
    let mut pi = Array2::<f64>::zeros((n, m));
    let mut support = Array2::from_elem((n, m), false);
    for i in 0..n {
        for j in 0..m {
            let slack = alpha[i] + beta[j] - c[[i, j]];
            if on(i, j) {
                if slack < -KKT_TOL * gamma {
                    return None;
                }
                pi[[i, j]] = slack.max(0.0) / gamma;
                support[[i, j]] = true;
            } else if slack > KKT_TOL {
                return None;
            }
        }
    }
    Some(ActiveSetCandidate {
        support,
        solution: TransportPlan::new(pi).ok()?,
        multipliers: DualPotentials::new(alpha, beta),
    })
}
