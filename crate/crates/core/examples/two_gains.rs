//! Unstable 2D plant closed with two different gains: the gain with slower
//! poles needs more iterations and gives a larger invariant set.
//!
//!     cargo run --example two_gains

use mpiset::matops::{eig_block_diag, matrix_from_rows};
use mpiset::mpi::{closed_loop_matrix, ConstraintSet};
use mpiset::{mpi_compute, Backend, MpiOptions, Result};

fn main() -> Result<()> {
    let a = matrix_from_rows(&[vec![1.38, 0.76], vec![0.16, 1.87]])?;
    let b = matrix_from_rows(&[vec![1.0], vec![1.0]])?;
    let x = ConstraintSet::symmetric_box(&[1.0, 1.0])?;
    let u = ConstraintSet::symmetric_box(&[1.0])?;
    // the gains are meant for u = -K x
    let opts = MpiOptions { sigma: -1, ..Default::default() };

    println!("{:<10} {:>14} {:>6} {:>4} {:>9}", "gain", "poles", "k_bar", "q", "ms");
    for (label, k) in [("riccati", [2.73, -0.80]), ("placement", [1.43, 0.16])] {
        let k = matrix_from_rows(&[k.to_vec()])?;
        let mut poles: Vec<f64> = eig_block_diag(&mpiset::matops::real_schur(&closed_loop_matrix(&a, &b, &k, -1)?, 0.0)?.s)?
            .iter()
            .map(|z| z.re)
            .collect();
        poles.sort_by(f64::total_cmp);
        let r = mpi_compute(&a, &b, &k, &x, &u, Backend::Hpoly, &opts)?;
        println!(
            "{label:<10} {:>6.3} {:>6.3} {:>6} {:>4} {:>9.3}",
            poles[0],
            poles[1],
            r.k_bar,
            r.q_bar().unwrap_or(0),
            r.wall_time.as_secs_f64() * 1e3
        );
    }
    Ok(())
}
