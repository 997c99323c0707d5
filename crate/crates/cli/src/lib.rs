//! Command-line front end: problem files in, deterministic JSON or text out.

pub mod error;
pub mod problem;
pub mod run;

use rayon::prelude::*;
use serde_json::Value;

pub use error::CliError;
pub use problem::{parse_problem, parse_problem_str, Command, Format, Options, Payload, ProblemFile};
pub use run::{execute, render};

/// Parses and runs one problem given as JSON.
pub fn solve(v: &Value) -> Result<(ProblemFile, Value), CliError> {
    let p = parse_problem(v)?;
    let out = execute(&p)?;
    Ok((p, out))
}

/// Runs every problem of a batch in parallel, keeping input order. Failed
/// entries become error objects; the exit code is the largest among them.
pub fn solve_batch(items: &[Value]) -> (Value, i32) {
    let results: Vec<Result<Value, CliError>> = items.par_iter().map(|v| solve(v).map(|(_, out)| out)).collect();
    let code = results.iter().filter_map(|r| r.as_ref().err()).map(CliError::exit_code).max().unwrap_or(0);
    let values = results
        .into_iter()
        .map(|r| r.unwrap_or_else(|e| e.to_json()))
        .collect();
    (Value::Array(values), code)
}
