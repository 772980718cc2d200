//! Problem files, run records, plots and the command implementations
//! behind the `qrot` binary.

pub mod commands;
pub mod output;
pub mod problem_file;
pub mod svg;

pub use commands::{
    exit_code, run_compare, run_generate, run_oracle_check, run_solve, Outcome, RunOptions,
};
pub use output::{read_run_rows, read_run_summary, write_run_record, RunRow, RunSummary};
pub use problem_file::{GridSpec, ProblemFile};
