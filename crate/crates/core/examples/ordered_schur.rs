//! Real Schur form with the zero eigenvalues moved to the trailing block.
//!
//!     cargo run --example ordered_schur

use mpiset::matops::{eig_block_diag, order_schur_zeros_last, orthogonality_error, real_schur, trailing_zero_dim};
use mpiset::{Matrix, Result, Vector};

fn main() -> Result<()> {
    // a 2-cell at zero, a complex pair 0.5 +- 0.3i and -0.4, hidden by a
    // Householder change of basis
    let t = Matrix::from_row_slice(
        5,
        5,
        &[
            0.0, 1.0, 0.3, -0.2, 0.1, //
            0.0, 0.0, 0.5, 0.4, -0.3, //
            0.0, 0.0, 0.5, 0.3, 0.2, //
            0.0, 0.0, -0.3, 0.5, 0.6, //
            0.0, 0.0, 0.0, 0.0, -0.4,
        ],
    );
    let v = Vector::from_vec(vec![1.0, -2.0, 0.5, 1.5, -1.0]);
    let h = Matrix::identity(5, 5) - &v * v.transpose() * (2.0 / v.norm_squared());
    let a = &h * t * &h;

    let f = real_schur(&a, 0.0)?;
    let eig: Vec<String> = eig_block_diag(&f.s)?.iter().map(|z| format!("{:.3}", z)).collect();
    println!("Schur order: {eig:?}");

    let ordered = order_schur_zeros_last(&f, 1e-9)?;
    let eig: Vec<String> = eig_block_diag(&ordered.s)?.iter().map(|z| format!("{:.3}", z)).collect();
    println!("zeros last:  {eig:?}");
    println!("S = {:.3}", ordered.s);
    println!("zero block size {}", trailing_zero_dim(&ordered.s, 1e-9));
    println!(
        "||A - U S U^T|| = {:.1e}, ||U^T U - I|| = {:.1e}",
        ordered.reconstruction_error(&a),
        orthogonality_error(&ordered.u)
    );
    Ok(())
}
