//! LQ gain synthesis by fixed-point iteration of the discrete-time Riccati
//! equation.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::matops::{eig_block_diag, ensure_finite, ensure_square, real_schur, Matrix};

/// Iterations without a halving of the step before a stalled iteration is
/// accepted.
const STALL_WINDOW: usize = 500;
/// Upper bound on the extra iterations run after the stopping test.
const POLISH_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct DareSpec {
    /// State weight, symmetric positive semidefinite.
    pub q: Matrix,
    /// Input weight, symmetric positive semidefinite. A singular `R` is
    /// accepted as long as `R + B^T P B` stays positive definite
    /// ("cheap control").
    pub r: Matrix,
    pub max_iter: usize,
    /// Relative step `||P_{k+1} - P_k||_F / max|P_k|` at which to stop. An
    /// iteration whose step stops shrinking is also accepted once the step
    /// is below `sqrt(tol)`.
    pub tol: f64,
}

impl DareSpec {
    /// `Q = q I_n`, `R = r I_m`.
    pub fn scaled_identity(n: usize, m: usize, q: f64, r: f64) -> Self {
        Self {
            q: Matrix::identity(n, n) * q,
            r: Matrix::identity(m, m) * r,
            max_iter: 100_000,
            tol: 1e-12,
        }
    }

    fn validate(&self, n: usize, m: usize) -> Result<()> {
        for (name, w, dim) in [("Q", &self.q, n), ("R", &self.r, m)] {
            if w.nrows() != dim || w.ncols() != dim {
                return Err(Error::DimensionMismatch(format!("{name} must be {dim}x{dim}")));
            }
            ensure_finite(w, name)?;
            let scale = 1.0 + w.norm();
            if (w - w.transpose()).norm() > 1e-10 * scale {
                return Err(Error::InvalidParams(format!("{name} is not symmetric")));
            }
            if dim > 0 && SymmetricEigen::new(w.clone()).eigenvalues.min() < -1e-10 * scale {
                return Err(Error::InvalidParams(format!("{name} is not positive semidefinite")));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParams("tol must be positive".into()));
        }
        Ok(())
    }
}

/// `(R + B^T P B)^-1 B^T P A` via Cholesky.
fn gain_factor(a: &Matrix, b: &Matrix, p: &Matrix, r: &Matrix) -> Result<Matrix> {
    let pb = p * b;
    let h = r + b.transpose() * &pb;
    let chol = h
        .cholesky()
        .ok_or_else(|| Error::InvalidParams("R + B^T P B is not positive definite".into()))?;
    Ok(chol.solve(&(pb.transpose() * a)))
}

/// `A^T P A - P - A^T P B (R + B^T P B)^-1 B^T P A + Q`.
pub fn riccati_residual(a: &Matrix, b: &Matrix, p: &Matrix, spec: &DareSpec) -> Result<Matrix> {
    let g = gain_factor(a, b, p, &spec.r)?;
    Ok(a.transpose() * p * a - p - a.transpose() * p * b * g + &spec.q)
}

pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    if a.nrows() == 0 {
        return Ok(0.0);
    }
    let f = real_schur(a, 0.0)?;
    Ok(eig_block_diag(&f.s)?.iter().map(|l| l.norm()).fold(0.0, f64::max))
}

/// Stabilizing solution `P` and gain `K = -(R + B^T P B)^-1 B^T P A`, so the
/// closed loop is `A + B K`.
pub fn dare_gain(a: &Matrix, b: &Matrix, spec: &DareSpec) -> Result<(Matrix, Matrix)> {
    let n = ensure_square(a)?;
    if b.nrows() != n {
        return Err(Error::DimensionMismatch(format!("B has {} rows, A is {n}x{n}", b.nrows())));
    }
    ensure_finite(a, "A")?;
    ensure_finite(b, "B")?;
    spec.validate(n, b.ncols())?;

    let step = |p: &Matrix| -> Result<(Matrix, f64)> {
        let g = gain_factor(a, b, p, &spec.r)?;
        let next = a.transpose() * p * a - a.transpose() * p * b * g + &spec.q;
        let next = (&next + next.transpose()) * 0.5;
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::NoConvergence("Riccati iteration"));
        }
        let rel = (&next - p).norm() / p.amax().max(1.0);
        Ok((next, rel))
    };

    let mut p = spec.q.clone();
    let mut converged = false;
    let (mut best, mut since_best) = (f64::INFINITY, 0usize);
    let mut last = f64::INFINITY;
    for _ in 0..spec.max_iter {
        let (next, rel) = step(&p)?;
        p = next;
        last = rel;
        if rel <= spec.tol {
            converged = true;
            break;
        }
        // ill-conditioned equations stall at a rounding floor above `tol`
        if rel < 0.5 * best {
            (best, since_best) = (rel, 0);
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW && best <= spec.tol.sqrt() {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Riccati iteration"));
    }
    // the residual lags the step by the contraction factor; keep going
    // while the steps still shrink
    for _ in 0..POLISH_STEPS {
        let (next, rel) = step(&p)?;
        if !(rel < last) {
            break;
        }
        p = next;
        last = rel;
    }
    let k = -gain_factor(a, b, &p, &spec.r)?;
    let rho = spectral_radius(&(a + b * &k))?;
    if rho >= 1.0 + spec.tol.sqrt() {
        return Err(Error::Unstabilizable(rho));
    }
    Ok((k, p))
}
