//! The same singular 6D problem with constrained zonotopes. The result has
//! no half-space form, so it is compared with the polyhedral run through
//! support functions.
//!
//!     cargo run --release --example cz_backend

use std::path::Path;

use mpiset::bench::ProblemFile;
use mpiset::mpi::RowCount;
use mpiset::{Backend, Result, Vector};

fn main() -> Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/singular6d.json");
    let mut problem = ProblemFile::load(&path)?.resolve()?;
    let h = problem.solve()?;
    problem.backend = Backend::Czono;
    let cz = problem.solve()?;

    if let RowCount::Generators { generators, constraints } = cz.row_count() {
        println!("zonotope: {generators} generators, {constraints} equality constraints");
    }
    println!("polyhedron: {} inequalities", h.q_bar().unwrap_or(0));

    let mut worst = 0.0_f64;
    for i in 0..100 {
        let d = Vector::from_fn(6, |j, _| ((1 + i * 6 + j) as f64 * 0.754).sin());
        let d = d.normalize();
        worst = worst.max((h.set.support(&d)? - cz.set.support(&d)?).abs());
    }
    println!("largest support gap over 100 directions: {worst:.2e}");
    Ok(())
}
