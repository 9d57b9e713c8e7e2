//! Half-space polytopes: redundant rows, containment and vertices.
//!
//!     cargo run --example redundancy

use mpiset::lp::support_hpoly;
use mpiset::polyset::{contains_h, intersect_h, remove_redundant, vertices_lowdim};
use mpiset::{HPolyhedron, Matrix, Result, Vector};

fn main() -> Result<()> {
    let square = HPolyhedron::symmetric_box(&[1.0, 1.0])?;
    // |x + y| <= 1.5 cuts two corners, x + y <= 3 cuts nothing
    let cuts = HPolyhedron::new(
        Matrix::from_row_slice(3, 2, &[1.0, 1.0, -1.0, -1.0, 1.0, 1.0]),
        Vector::from_vec(vec![1.5, 1.5, 3.0]),
    )?;
    let both = intersect_h(&square, &cuts)?;
    let lean = remove_redundant(&both, 1e-9)?;
    println!("{} rows -> {} after removing redundant ones", both.num_rows(), lean.num_rows());
    println!("square contains the cut set: {}", contains_h(&square, &lean, 1e-9)?);
    println!("cut set contains the square: {}", contains_h(&lean, &square, 1e-9)?);
    println!("support along (1, 1): {}", support_hpoly(&lean, &Vector::from_vec(vec![1.0, 1.0]))?);
    for v in vertices_lowdim(&lean, 1e-9)? {
        println!("  vertex ({:>5.2}, {:>5.2})", v[0], v[1]);
    }
    Ok(())
}
