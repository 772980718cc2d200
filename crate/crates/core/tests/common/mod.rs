#![allow(dead_code)]

use std::path::Path;

use ndarray::{Array1, Array2};
use qrot::io::{GridSpec, ProblemFile};
use qrot::problems::{CostKind, MixtureComponent, MixtureSpec};
use qrot::TransportProblem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Positive weights summing to one.
pub fn positive_simplex(rng: &mut ChaCha8Rng, n: usize) -> Array1<f64> {
    let w: Array1<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let s = w.sum();
    w / s
}

/// Random balanced instance with costs in `[0, 1]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> TransportProblem {
    let mu = positive_simplex(rng, n);
    let nu = positive_simplex(rng, m);
    let c = Array2::from_shape_fn((n, m), |_| rng.random_range(0.0..=1.0));
    TransportProblem::from_arrays(mu, nu, c).expect("balanced by construction")
}

/// A problem file with one random Gaussian per marginal on a `n x m` unit grid.
pub fn random_problem_file(rng: &mut ChaCha8Rng, n: usize, m: usize, gamma: f64) -> ProblemFile {
    let mut spec = || {
        MixtureSpec::new(vec![MixtureComponent {
            weight: 1.0,
            mean: rng.random_range(0.2..0.8),
            std: rng.random_range(0.2..0.6),
        }])
        .unwrap()
    };
    ProblemFile {
        gamma,
        cost: CostKind::SquaredDistance,
        grid1: GridSpec::unit(n),
        grid2: GridSpec::unit(m),
        marginal1: spec(),
        marginal2: spec(),
    }
}

/// Reads a run-record CSV and drops the `elapsed_ms` column.
pub fn csv_without_elapsed(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let drop = headers
        .iter()
        .position(|h| h == "elapsed_ms")
        .expect("elapsed_ms column");
    let mut out = String::new();
    let keep = |rec: &csv::StringRecord| -> String {
        rec.iter()
            .enumerate()
            .filter(|&(k, _)| k != drop)
            .map(|(_, v)| v)
            .collect::<Vec<_>>()
            .join(",")
    };
    out.push_str(&keep(&headers));
    out.push('\n');
    for rec in reader.records() {
        out.push_str(&keep(&rec.unwrap()));
        out.push('\n');
    }
    out
}
