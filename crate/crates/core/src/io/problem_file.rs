use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Grid1D, TransportProblem};
use crate::problems::{
    cost_matrix, default_marginal_specs, mixture_marginal, CostKind, MixtureSpec, DEFAULT_CELLS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

impl GridSpec {
    pub fn unit(n: usize) -> Self {
        Self { n, a: 0.0, b: 1.0 }
    }

    pub fn to_grid(self) -> Result<Grid1D> {
        Grid1D::new(self.n, self.a, self.b)
    }
}

/// TOML description of a benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub gamma: f64,
    pub cost: CostKind,
    pub grid1: GridSpec,
    pub grid2: GridSpec,
    pub marginal1: MixtureSpec,
    pub marginal2: MixtureSpec,
}

impl ProblemFile {
    /// The default benchmark with the given cost and weight.
    pub fn benchmark(cells: usize, cost: CostKind, gamma: f64) -> Self {
        let (marginal1, marginal2) = default_marginal_specs();
        Self {
            gamma,
            cost,
            grid1: GridSpec::unit(cells),
            grid2: GridSpec::unit(cells),
            marginal1,
            marginal2,
        }
    }

    pub fn default_benchmark() -> Self {
        Self::benchmark(DEFAULT_CELLS, CostKind::SquaredDistance, 10.0)
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let file: ProblemFile = toml::from_str(text).map_err(|e| e.to_string())?;
        file.check().map(|()| file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem files always serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    /// Field-level validation; messages start with the offending key.
    fn check(&self) -> std::result::Result<(), String> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(format!(
                "gamma: must be a positive number, got {}",
                self.gamma
            ));
        }
        for (key, grid) in [("grid1", self.grid1), ("grid2", self.grid2)] {
            if grid.n == 0 {
                return Err(format!("{key}.n: must be positive"));
            }
            if !(grid.a.is_finite() && grid.b.is_finite() && grid.a < grid.b) {
                return Err(format!(
                    "{key}: need finite a < b, got a = {}, b = {}",
                    grid.a, grid.b
                ));
            }
        }
        for (key, spec) in [
            ("marginal1", &self.marginal1),
            ("marginal2", &self.marginal2),
        ] {
            if spec.components.is_empty() {
                return Err(format!("{key}.components: need at least one component"));
            }
            for (k, c) in spec.components.iter().enumerate() {
                if !(c.weight.is_finite() && c.weight > 0.0) {
                    return Err(format!("{key}.components[{k}].weight: must be positive"));
                }
                if !c.mean.is_finite() {
                    return Err(format!("{key}.components[{k}].mean: must be finite"));
                }
                if !(c.std.is_finite() && c.std > 0.0) {
                    return Err(format!("{key}.components[{k}].std: must be positive"));
                }
            }
            if let Err(e) = spec.validate() {
                return Err(format!("{key}.components: {e}"));
            }
        }
        Ok(())
    }

    /// Generates marginals and cost.
    pub fn to_problem(&self) -> Result<TransportProblem> {
        let g1 = self.grid1.to_grid()?;
        let g2 = self.grid2.to_grid()?;
        let mu = mixture_marginal(&g1, &self.marginal1)?;
        let nu = mixture_marginal(&g2, &self.marginal2)?;
        TransportProblem::new(mu, nu, cost_matrix(&g1, &g2, self.cost))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let file = ProblemFile::default_benchmark();
        let text = file.to_toml();
        assert_eq!(ProblemFile::parse(&text).unwrap(), file);
        assert!(text.contains("cost = \"squared\""));
    }

    #[test]
    fn zero_gamma_names_the_field() {
        let mut file = ProblemFile::default_benchmark();
        file.gamma = 0.0;
        let err = ProblemFile::parse(&file.to_toml()).unwrap_err();
        assert!(err.starts_with("gamma"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let err = ProblemFile::parse("gamma = 1.0\ncost = \n").unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_and_missing_keys_are_rejected() {
        let mut text = ProblemFile::default_benchmark().to_toml();
        text = text.replace("gamma = 10.0", "gama = 10.0");
        let err = ProblemFile::parse(&text).unwrap_err();
        assert!(err.contains("gama") || err.contains("gamma"), "{err}");
    }

    #[test]
    fn bad_component_names_its_path() {
        let mut file = ProblemFile::default_benchmark();
        file.marginal2.components[1].std = -1.0;
        let err = ProblemFile::parse(&file.to_toml()).unwrap_err();
        assert!(err.starts_with("marginal2.components[1].std"), "{err}");
    }

    #[test]
    fn generates_balanced_problem() {
        let p = ProblemFile::benchmark(12, CostKind::AbsoluteDistance, 5.0)
            .to_problem()
            .unwrap();
        assert_eq!(p.dims(), (12, 12));
    }
}
