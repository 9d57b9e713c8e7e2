//! The bounded-variable simplex behind every set query, used directly.
//!
//!     cargo run --example lp_support

use mpiset::lp::{lp_solve, member_cz, support_cz, LinearProgram, LpStatus};
use mpiset::{ConstrainedZonotope, Matrix, Result, Vector};

fn main() -> Result<()> {
    // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0
    let lp = LinearProgram::new(Vector::from_vec(vec![3.0, 5.0]))
        .with_ineq(
            Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 3.0, 2.0]),
            Vector::from_vec(vec![4.0, 12.0, 18.0]),
        )
        .with_bounds(Vector::zeros(2), Vector::from_element(2, f64::INFINITY));
    let out = lp_solve(&lp, 1e-9)?;
    if let LpStatus::Optimal { x, value } = &out.status {
        println!("optimum {value} at ({}, {}) after {} pivots", x[0], x[1], out.iterations);
    }

    // unit square cut by xi_1 = xi_2: the diagonal segment
    let z = ConstrainedZonotope::new(
        Vector::zeros(2),
        Matrix::identity(2, 2),
        Matrix::from_row_slice(1, 2, &[1.0, -1.0]),
        Vector::zeros(1),
    )?;
    println!("support along (1, 0): {}", support_cz(&z, &Vector::from_vec(vec![1.0, 0.0]))?);
    println!("(0.5, 0.5) inside: {}", member_cz(&z, &Vector::from_vec(vec![0.5, 0.5]), 1e-9)?);
    println!("(0.5, -0.5) inside: {}", member_cz(&z, &Vector::from_vec(vec![0.5, -0.5]), 1e-9)?);
    Ok(())
}
