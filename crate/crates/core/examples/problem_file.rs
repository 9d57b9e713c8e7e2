//! Runs a JSON problem file and prints the JSON report, as `mpiset compute`
//! does.
//!
//!     cargo run --example problem_file -- examples/data/plant2d_dare.json

use std::path::PathBuf;

use mpiset::bench::run_problem;
use mpiset::Result;

fn main() -> Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/plant2d_riccati.json")
    });
    let (result, report) = run_problem(&path)?;
    eprintln!("{}: {} branch, k_bar = {}", path.display(), result.branch.as_str(), result.k_bar);
    println!("{}", report.to_json()?);
    Ok(())
}
