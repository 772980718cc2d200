//! Runs all four quadratic methods on one benchmark and writes run records
//! plus `convergence.svg` to a directory.
//!
//! cargo run --release --example compare_algorithms -- [out_dir]

use std::path::PathBuf;

use qrot::io::{run_compare, ProblemFile, RunOptions};

fn main() -> qrot::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("qrot-compare"), PathBuf::from);
    std::fs::create_dir_all(&out).map_err(|e| qrot::Error::Io {
        path: out.clone(),
        source: e,
    })?;
    let problem_path = out.join("problem.toml");
    ProblemFile::default_benchmark().save(&problem_path)?;

    let options = RunOptions {
        tol: 1e-5,
        history_stride: 10,
        ..RunOptions::default()
    };
    let outcome = run_compare(&problem_path, &options, &out)?;
    println!("{outcome:?}; results in {}", out.display());
    for alg in qrot::Algorithm::QUADRATIC {
        let summary =
            qrot::io::read_run_summary(&out.join(format!("{}_summary.toml", alg.name())))?;
        println!(
            "{:<18} {:>7} iterations  violation {:.2e}",
            summary.algorithm, summary.iterations, summary.final_violation
        );
    }
    Ok(())
}
