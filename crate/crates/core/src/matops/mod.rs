//! Dense real matrix kernel: Hessenberg reduction, real Schur form via the
//! Francis double-shift QR iteration, and reordering of the Schur form so
//! that eigenvalues appear by descending magnitude (zero blocks last).

mod hessenberg;
mod reorder;
mod schur;

pub use hessenberg::hessenberg;
pub use reorder::{order_schur_zeros_last, schur_blocks, trailing_zero_dim, SchurBlock};
pub use schur::{real_schur, SchurFactorization};

use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Builds a matrix from row slices, rejecting ragged or non-finite input.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m, "matrix")?;
    Ok(m)
}

pub fn ensure_finite(m: &Matrix, what: &'static str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn ensure_square(a: &Matrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// `A^k` by repeated squaring; `A^0 = I`.
pub fn mat_power(a: &Matrix, k: usize) -> Result<Matrix> {
    let n = ensure_square(a)?;
    let mut result = Matrix::identity(n, n);
    let mut base = a.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

/// Solves `A X = B` with partial-pivoting LU.
///
/// Fails with [`Error::SingularMatrix`] when the smallest pivot is negligible
/// relative to the largest, or when the residual check fails.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = ensure_square(a)?;
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "solve: A is {n}x{n}, B has {} rows",
            b.nrows()
        )));
    }
    if n == 0 {
        return Ok(b.clone());
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for i in 0..n {
        let d = u[(i, i)].abs();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if hi == 0.0 || lo <= hi * 1e-14 {
        return Err(Error::SingularMatrix);
    }
    let x = lu.solve(b).ok_or(Error::SingularMatrix)?;
    ensure_finite(&x, "solve result").map_err(|_| Error::SingularMatrix)?;
    Ok(x)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = ensure_square(a)?;
    solve(a, &Matrix::identity(n, n))
}

/// Eigenvalues read off the 1x1 and 2x2 diagonal blocks of a quasi-triangular
/// matrix, in block order.
pub fn eig_block_diag(s: &Matrix) -> Result<Vec<Complex<f64>>> {
    ensure_square(s)?;
    let mut out = Vec::with_capacity(s.nrows());
    for block in schur_blocks(s) {
        let (a, b) = block.eigenvalues(s);
        out.push(a);
        if block.size == 2 {
            out.push(b);
        }
    }
    Ok(out)
}

/// Frobenius norm of `U^T U - I`.
pub fn orthogonality_error(u: &Matrix) -> f64 {
    let n = u.ncols();
    (u.transpose() * u - Matrix::identity(n, n)).norm()
}
