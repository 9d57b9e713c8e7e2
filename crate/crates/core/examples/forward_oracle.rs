//! The forward-power recurrence needs no inverse, so it handles any closed
//! loop. Here it checks the Schur-based computation on a small map whose
//! nilpotent part feeds the stable mode.
//!
//!     cargo run --example forward_oracle

use mpiset::mpi::{mpi_oracle_forward, mpi_singular_h, mpi_standard_h};
use mpiset::polyset::{equals_h, vertices_lowdim};
use mpiset::{HPolyhedron, Matrix, MpiOptions, Result};

fn main() -> Result<()> {
    let a = Matrix::from_row_slice(3, 3, &[0.6, 1.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let x = HPolyhedron::symmetric_box(&[1.0, 2.0, 3.0])?;
    let opts = MpiOptions::default();

    match mpi_standard_h(&a, &x, &opts) {
        Err(e) => println!("backward recurrence: {e}"),
        Ok(_) => unreachable!("A is singular"),
    }
    let split = mpi_singular_h(&a, &x, &opts)?;
    let oracle = mpi_oracle_forward(&a, &x, opts.k_max)?;
    let (s, o) = (split.set.as_h().unwrap(), oracle.set.as_h().unwrap());
    println!("Schur split:   {} inequalities", s.num_rows());
    println!("forward powers: {} inequalities after {} steps", o.num_rows(), oracle.k_bar);
    println!("equal: {}", equals_h(s, o, 1e-9)?);
    for v in vertices_lowdim(s, 1e-9)? {
        println!("  vertex [{:>7.3} {:>7.3} {:>7.3}]", v[0], v[1], v[2]);
    }
    Ok(())
}
