//! Reproducible 1D benchmark instances: Gaussian-mixture marginals sampled at
//! cell centers and distance-based cost matrices.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CostMatrix, DiscreteMeasure, Grid1D, TransportProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<MixtureComponent>,
}

impl MixtureSpec {
    pub fn new(components: Vec<MixtureComponent>) -> Result<Self> {
        let spec = Self { components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn single(mean: f64, std: f64) -> Result<Self> {
        Self::new(vec![MixtureComponent {
            weight: 1.0,
            mean,
            std,
        }])
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::invalid("components", "need at least one component"));
        }
        for c in &self.components {
            if !(c.weight.is_finite() && c.weight > 0.0) {
                return Err(Error::invalid(
                    "weight",
                    format!("must be positive, got {}", c.weight),
                ));
            }
            if !c.mean.is_finite() {
                return Err(Error::invalid("mean", "must be finite"));
            }
            if !(c.std.is_finite() && c.std > 0.0) {
                return Err(Error::invalid(
                    "std",
                    format!("must be positive, got {}", c.std),
                ));
            }
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "weight",
                format!("component weights must sum to 1, got {total}"),
            ));
        }
        Ok(())
    }
}

/// Relative positivity floor applied before normalization.
pub const MARGINAL_FLOOR: f64 = 1e-12;

/// Mixture density at cell centers, floored at `1e-12 · max` and normalized to mass 1.
pub fn mixture_marginal(grid: &Grid1D, spec: &MixtureSpec) -> Result<DiscreteMeasure> {
    spec.validate()?;
    let mut w: Array1<f64> = grid.points().mapv(|x| {
        spec.components
            .iter()
            .map(|c| c.weight * (-(x - c.mean).powi(2) / (2.0 * c.std * c.std)).exp())
            .sum()
    });
    let peak = w.fold(0.0f64, |a, &b| a.max(b));
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::invalid(
            "mixture",
            "density underflows on the whole grid; move the means onto the domain",
        ));
    }
    let floor = MARGINAL_FLOOR * peak;
    w.mapv_inplace(|v| v.max(floor));
    let mass = w.sum();
    w /= mass;
    DiscreteMeasure::on_grid(grid.clone(), w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostKind {
    /// `|x − y|²`
    #[serde(rename = "squared")]
    SquaredDistance,
    /// `|x − y|`
    #[serde(rename = "absolute")]
    AbsoluteDistance,
}

impl CostKind {
    pub fn name(self) -> &'static str {
        match self {
            CostKind::SquaredDistance => "squared",
            CostKind::AbsoluteDistance => "absolute",
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(CostKind::SquaredDistance),
            "absolute" => Ok(CostKind::AbsoluteDistance),
            other => Err(Error::invalid(
                "cost",
                format!("expected \"squared\" or \"absolute\", got {other:?}"),
            )),
        }
    }
}

pub fn cost_matrix(rows: &Grid1D, cols: &Grid1D, kind: CostKind) -> CostMatrix {
    let (x, y) = (rows.points(), cols.points());
    let c = Array2::from_shape_fn((x.len(), y.len()), |(i, j)| {
        let d = x[i] - y[j];
        match kind {
            CostKind::SquaredDistance => d * d,
            CostKind::AbsoluteDistance => d.abs(),
        }
    });
    CostMatrix::new(c).expect("grid points are finite")
}

/// Regularization weights of the squared-cost experiments.
pub const SQUARED_COST_GAMMAS: [f64; 3] = [50.0, 10.0, 4.0];
/// Regularization weights of the absolute-cost experiments.
pub const ABSOLUTE_COST_GAMMAS: [f64; 3] = [100.0, 50.0, 15.0];
/// Default cells per marginal.
pub const DEFAULT_CELLS: usize = 100;

/// Bimodal source and unimodal target used by the default benchmark.
pub fn default_marginal_specs() -> (MixtureSpec, MixtureSpec) {
    let source = MixtureSpec {
        components: vec![
            MixtureComponent {
                weight: 0.5,
                mean: 0.25,
                std: 0.05,
            },
            MixtureComponent {
                weight: 0.5,
                mean: 0.75,
                std: 0.05,
            },
        ],
    };
    let target = MixtureSpec {
        components: vec![
            MixtureComponent {
                weight: 0.3,
                mean: 0.35,
                std: 0.08,
            },
            MixtureComponent {
                weight: 0.7,
                mean: 0.6,
                std: 0.1,
            },
        ],
    };
    (source, target)
}

/// A ready-to-solve benchmark on `[0, 1]` with `cells` cells per side.
pub fn default_benchmark(cells: usize, kind: CostKind) -> Result<TransportProblem> {
    let grid = Grid1D::new(cells, 0.0, 1.0)?;
    let (source, target) = default_marginal_specs();
    let mu = mixture_marginal(&grid, &source)?;
    let nu = mixture_marginal(&grid, &target)?;
    let c = cost_matrix(&grid, &grid, kind);
    TransportProblem::new(mu, nu, c)
}
