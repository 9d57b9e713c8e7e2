use super::{ensure_square, Matrix};
use crate::error::Result;

/// Householder reduction to upper-Hessenberg form: returns `(Q, H)` with
/// `Q^T A Q = H`, `Q` orthogonal.
pub fn hessenberg(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = ensure_square(a)?;
    let mut h = a.clone();
    let mut q = Matrix::identity(n, n);
    if n < 3 {
        return Ok((q, h));
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let scale: f64 = (k + 1..n).map(|i| h[(i, k)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut norm2 = 0.0;
        for i in k + 1..n {
            v[i] = h[(i, k)] / scale;
            norm2 += v[i] * v[i];
        }
        let tail2 = norm2 - v[k + 1] * v[k + 1];
        if tail2 == 0.0 {
            // column already in Hessenberg shape
            continue;
        }
        let alpha = -v[k + 1].signum() * norm2.sqrt();
        v[k + 1] -= alpha;
        let vnorm2 = tail2 + v[k + 1] * v[k + 1];
        let beta = 2.0 / vnorm2;

        // H <- P H
        for j in 0..n {
            let dot: f64 = (k + 1..n).map(|i| v[i] * h[(i, j)]).sum();
            let f = beta * dot;
            for i in k + 1..n {
                h[(i, j)] -= f * v[i];
            }
        }
        // H <- H P, Q <- Q P
        for i in 0..n {
            let dot: f64 = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            let f = beta * dot;
            for j in k + 1..n {
                h[(i, j)] -= f * v[j];
            }
            let dot: f64 = (k + 1..n).map(|j| q[(i, j)] * v[j]).sum();
            let f = beta * dot;
            for j in k + 1..n {
                q[(i, j)] -= f * v[j];
            }
        }
        h[(k + 1, k)] = alpha * scale;
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    Ok((q, h))
}
