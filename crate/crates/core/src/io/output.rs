//! Plain-text matrices, run records (CSV plus a TOML summary) and their readers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::{ConvergenceReport, SolverConfig};

/// Writes one row per line, space separated, plus a `<stem>.shape` sidecar
/// holding `rows cols`.
pub fn write_matrix(path: &Path, values: &Array2<f64>) -> Result<()> {
    let mut text = String::with_capacity(values.len() * 24);
    for row in values.outer_iter() {
        let mut first = true;
        for v in row {
            if !first {
                text.push(' ');
            }
            first = false;
            write!(text, "{v:e}").expect("writing to a String");
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))?;
    let shape = path.with_extension("shape");
    let (r, c) = values.dim();
    fs::write(&shape, format!("{r} {c}\n")).map_err(|e| Error::io(shape, e))
}

pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let shape_path = path.with_extension("shape");
    let shape = fs::read_to_string(&shape_path).map_err(|e| Error::io(&shape_path, e))?;
    let dims: Vec<usize> = shape
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_error(&shape_path, format!("bad shape: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(parse_error(&shape_path, "expected `rows cols`"));
    };
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let values: Vec<f64> = text
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_error(path, format!("bad number: {e}")))?;
    Array2::from_shape_vec((rows, cols), values)
        .map_err(|e| parse_error(path, format!("shape mismatch: {e}")))
}

/// One value per line.
pub fn write_vector(path: &Path, values: &Array1<f64>) -> Result<()> {
    let mut text = String::new();
    for v in values {
        writeln!(text, "{v:e}").expect("writing to a String");
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_vector(path: &Path) -> Result<Array1<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .map(|l| l.trim().parse::<f64>())
        .collect::<std::result::Result<Array1<f64>, _>>()
        .map_err(|e| parse_error(path, format!("bad number: {e}")))
}

fn parse_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// A row of the per-iteration CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub iteration: usize,
    pub max_violation: f64,
    pub dual_objective: f64,
    pub primal_objective: f64,
    pub duality_gap: f64,
    pub elapsed_ms: f64,
}

/// Footer of a run record, stored as a TOML sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub algorithm: String,
    pub converged: bool,
    pub iterations: usize,
    pub gamma: f64,
    pub tol: f64,
    pub final_violation: f64,
}

/// Paths of a written run record.
#[derive(Debug, Clone)]
pub struct RunRecordPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

pub fn run_record_paths(dir: &Path, name: &str) -> RunRecordPaths {
    RunRecordPaths {
        csv: dir.join(format!("{name}.csv")),
        summary: dir.join(format!("{name}_summary.toml")),
    }
}

pub fn write_run_record(
    dir: &Path,
    report: &ConvergenceReport,
    config: &SolverConfig,
) -> Result<RunRecordPaths> {
    let paths = run_record_paths(dir, report.algorithm.name());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(&paths.csv)?;
    for h in &report.history {
        w.serialize(RunRow {
            iteration: h.iteration,
            max_violation: h.max_violation,
            dual_objective: h.dual_objective,
            primal_objective: h.primal_objective,
            duality_gap: h.duality_gap,
            elapsed_ms: h.elapsed.as_secs_f64() * 1e3,
        })?;
    }
    w.flush().map_err(|e| Error::io(&paths.csv, e))?;

    let summary = RunSummary {
        algorithm: report.algorithm.name().to_string(),
        converged: report.converged,
        iterations: report.iterations,
        gamma: config.gamma,
        tol: config.tol,
        final_violation: report.final_violation,
    };
    let text = toml::to_string(&summary).expect("summary serializes");
    fs::write(&paths.summary, text).map_err(|e| Error::io(&paths.summary, e))?;
    Ok(paths)
}

pub fn read_run_rows(path: &Path) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<RunRow>, _>>()?;
    Ok(rows)
}

pub fn read_run_summary(path: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| parse_error(path, e.to_string()))
}
