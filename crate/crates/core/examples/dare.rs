//! LQ gains from the Riccati fixed-point iteration, on the unstable 2D plant
//! and on a spring-mass chain in the cheap-control limit.
//!
//!     cargo run --example dare

use mpiset::bench::{cse_generate, CseParams};
use mpiset::matops::{eig_block_diag, matrix_from_rows, real_schur};
use mpiset::synthesis::{dare_gain, riccati_residual, spectral_radius, DareSpec};
use mpiset::Result;

fn main() -> Result<()> {
    let a = matrix_from_rows(&[vec![1.38, 0.76], vec![0.16, 1.87]])?;
    let b = matrix_from_rows(&[vec![1.0], vec![1.0]])?;
    let spec = DareSpec::scaled_identity(2, 1, 1.0, 1.0);
    let (k, p) = dare_gain(&a, &b, &spec)?;
    println!("2D plant: K = {:.4}", k);
    println!("  residual {:.1e}, rho(A + BK) = {:.4}", riccati_residual(&a, &b, &p, &spec)?.norm(), spectral_radius(&(&a + &b * &k))?);

    let sys = cse_generate(&CseParams::new(3))?;
    for r in [1.0, 0.0] {
        let spec = DareSpec::scaled_identity(6, 2, 1.0, r);
        let (k, _) = dare_gain(&sys.a, &sys.b, &spec)?;
        let a_cl = &sys.a + &sys.b * &k;
        let mut mags: Vec<f64> = eig_block_diag(&real_schur(&a_cl, 0.0)?.s)?.iter().map(|z| z.norm()).collect();
        mags.sort_by(f64::total_cmp);
        println!("chain of 3, R = {r} I: smallest |eig| {:.1e}, {:.1e}, {:.1e}", mags[0], mags[1], mags[2]);
    }
    Ok(())
}
