use super::schur::standardize_block;
use super::{solve, Matrix, SchurFactorization};
use crate::error::{Error, Result};
use nalgebra::Complex;

/// A 1x1 or 2x2 diagonal block of a quasi-triangular matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchurBlock {
    pub start: usize,
    pub size: usize,
}

impl SchurBlock {
    pub fn eigenvalues(&self, s: &Matrix) -> (Complex<f64>, Complex<f64>) {
        let k = self.start;
        if self.size == 1 {
            let v = Complex::new(s[(k, k)], 0.0);
            return (v, v);
        }
        let (a, b, c, d) = (s[(k, k)], s[(k, k + 1)], s[(k + 1, k)], s[(k + 1, k + 1)]);
        let mean = 0.5 * (a + d);
        let disc = 0.25 * (a - d) * (a - d) + b * c;
        if disc < 0.0 {
            let im = (-disc).sqrt();
            (Complex::new(mean, im), Complex::new(mean, -im))
        } else {
            let r = disc.sqrt();
            (Complex::new(mean + r, 0.0), Complex::new(mean - r, 0.0))
        }
    }

    /// Largest eigenvalue modulus in the block.
    pub fn magnitude(&self, s: &Matrix) -> f64 {
        let (a, b) = self.eigenvalues(s);
        a.norm().max(b.norm())
    }
}

/// Diagonal block structure of a quasi-triangular matrix; a nonzero
/// subdiagonal entry marks a 2x2 block.
pub fn schur_blocks(s: &Matrix) -> Vec<SchurBlock> {
    let n = s.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && s[(i + 1, i)] != 0.0 {
            blocks.push(SchurBlock { start: i, size: 2 });
            i += 2;
        } else {
            blocks.push(SchurBlock { start: i, size: 1 });
            i += 1;
        }
    }
    blocks
}

/// Magnitudes within this relative distance are treated as ties and never
/// exchanged.
const TIE_RTOL: f64 = 1e-7;
/// Largest acceptable fill-in below the diagonal after an exchange, relative
/// to `||S||_F`.
const SWAP_RESIDUAL_RTOL: f64 = 1e-9;

/// Blocks below `eps_zero^(1/4) * ||A||_F` may belong to a perturbed zero
/// cluster. A Jordan cell of size j splits its zero eigenvalue into a ring of
/// radius about `eps^(1/j) * ||A||`, so this admits cells up to size four.
fn cluster_cap(eps_zero: f64, anorm: f64) -> f64 {
    eps_zero.powf(0.25) * anorm
}

/// Reorders the Schur form so diagonal blocks appear by descending eigenvalue
/// magnitude. Blocks with `|lambda| <= eps_zero * ||A||_F` count as exact
/// zeros and collect in the trailing principal submatrix.
///
/// Exchanges between two blocks that are both below the cluster cap are
/// skipped when the Sylvester solve is ill-conditioned; such blocks are
/// numerically indistinguishable and their relative order is irrelevant.
pub fn order_schur_zeros_last(f: &SchurFactorization, eps_zero: f64) -> Result<SchurFactorization> {
    let mut s = f.s.clone();
    let mut u = f.u.clone();
    let n = s.nrows();
    let anorm = s.norm();
    let zero_tol = eps_zero * anorm;
    let cap = cluster_cap(eps_zero, anorm);
    let key = |m: f64| if m <= zero_tol { 0.0 } else { m };

    let max_swaps = 4 * n * n + 16;
    let mut swaps = 0;
    loop {
        let mut progressed = false;
        let mut idx = 0;
        loop {
            let blocks = schur_blocks(&s);
            if idx + 1 >= blocks.len() {
                break;
            }
            let (b0, b1) = (blocks[idx], blocks[idx + 1]);
            let (m0, m1) = (b0.magnitude(&s), b1.magnitude(&s));
            if key(m1) > key(m0) * (1.0 + TIE_RTOL) {
                match swap_adjacent(&s, &u, b0.start, b0.size, b1.size) {
                    Ok((s2, u2)) => {
                        s = s2;
                        u = u2;
                        progressed = true;
                        swaps += 1;
                        if swaps > max_swaps {
                            return Err(Error::SwapIllConditioned(b0.start));
                        }
                    }
                    Err(_) if m0 <= cap && m1 <= cap => {}
                    Err(e) => return Err(e),
                }
            }
            idx += 1;
        }
        if !progressed {
            break;
        }
    }
    Ok(SchurFactorization { u, s })
}

/// Dimension of the trailing zero-eigenvalue cluster of an ordered Schur
/// form.
///
/// A trailing block of size d (on a block boundary) qualifies when every
/// block in it is below the cluster cap and it is numerically nilpotent:
/// `||S22^d||_F <= eps_zero * ||S||_F * ||S22||_F^(d-1)`. For d = 1 this is
/// exactly `|lambda| <= eps_zero * ||S||_F`; for larger d it accepts the
/// eigenvalue rings that rounding produces from defective zeros, which the
/// plain magnitude test misses. The largest qualifying d is returned.
pub fn trailing_zero_dim(s: &Matrix, eps_zero: f64) -> usize {
    let n = s.nrows();
    let anorm = s.norm();
    let cap = cluster_cap(eps_zero, anorm);
    let mut best = 0;
    let mut d = 0;
    for b in schur_blocks(s).iter().rev() {
        if b.magnitude(s) > cap {
            break;
        }
        d += b.size;
        let tail = s.view((n - d, n - d), (d, d)).into_owned();
        if is_nilpotent(&tail, eps_zero * anorm) {
            best = d;
        }
    }
    best
}

fn is_nilpotent(t: &Matrix, tol: f64) -> bool {
    let tn = t.norm();
    if tn <= tol {
        return true;
    }
    let d = t.nrows();
    let mut pw = t.clone();
    for _ in 1..d {
        pw = &pw * t;
    }
    pw.norm() <= tol * tn.powi(d as i32 - 1).min(1.0)
}

/// Exchanges the adjacent diagonal blocks of sizes `p` and `q` starting at
/// `k` by solving the Sylvester equation `A11 X - X A22 = A12`.
fn swap_adjacent(s0: &Matrix, u0: &Matrix, k: usize, p: usize, q: usize) -> Result<(Matrix, Matrix)> {
    let (mut s, mut u) = (s0.clone(), u0.clone());
    let r = p + q;
    let a11 = s.view((k, k), (p, p)).into_owned();
    let a12 = s.view((k, k + p), (p, q)).into_owned();
    let a22 = s.view((k + p, k + p), (q, q)).into_owned();

    // (I_q kron A11 - A22^T kron I_p) vec(X) = vec(A12), column-major vec
    let dim = p * q;
    let mut kron = Matrix::zeros(dim, dim);
    for jq in 0..q {
        for ip in 0..p {
            let row = jq * p + ip;
            for kp in 0..p {
                kron[(row, jq * p + kp)] += a11[(ip, kp)];
            }
            for kq in 0..q {
                kron[(row, kq * p + ip)] -= a22[(kq, jq)];
            }
        }
    }
    let rhs = Matrix::from_iterator(dim, 1, a12.iter().copied());
    let x = solve(&kron, &rhs).map_err(|_| Error::SwapIllConditioned(k))?;

    // columns of [-X; I_q] span the invariant subspace belonging to A22
    let mut w = Matrix::zeros(r, q);
    for jq in 0..q {
        for ip in 0..p {
            w[(ip, jq)] = -x[(jq * p + ip, 0)];
        }
        w[(p + jq, jq)] = 1.0;
    }
    let qm = full_q(&w);

    let n = s.nrows();
    let rows = s.view((k, 0), (r, n)).into_owned();
    s.view_mut((k, 0), (r, n)).copy_from(&(qm.transpose() * rows));
    let cols = s.view((0, k), (n, r)).into_owned();
    s.view_mut((0, k), (n, r)).copy_from(&(cols * &qm));
    let ucols = u.view((0, k), (n, r)).into_owned();
    u.view_mut((0, k), (n, r)).copy_from(&(ucols * &qm));

    let fill = s.view((k + q, k), (p, q)).norm();
    if fill > SWAP_RESIDUAL_RTOL * s.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::SwapIllConditioned(k));
    }
    s.view_mut((k + q, k), (p, q)).fill(0.0);
    let negligible = f64::EPSILON * s.norm();
    if q == 2 {
        standardize_block(&mut s, &mut u, k, negligible);
    }
    if p == 2 {
        standardize_block(&mut s, &mut u, k + q, negligible);
    }
    Ok((s, u))
}

/// Full orthogonal factor of a Householder QR of the tall matrix `w`.
fn full_q(w: &Matrix) -> Matrix {
    let (m, ncols) = w.shape();
    let mut a = w.clone();
    let mut q = Matrix::identity(m, m);
    for j in 0..ncols {
        let norm = (j..m).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut v = vec![0.0; m];
        for i in j..m {
            v[i] = a[(i, j)];
        }
        v[j] += if a[(j, j)] >= 0.0 { norm } else { -norm };
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;
        for c in 0..ncols {
            let dot: f64 = (j..m).map(|i| v[i] * a[(i, c)]).sum();
            for i in j..m {
                a[(i, c)] -= beta * dot * v[i];
            }
        }
        for i in 0..m {
            let dot: f64 = (j..m).map(|c| q[(i, c)] * v[c]).sum();
            for c in j..m {
                q[(i, c)] -= beta * dot * v[c];
            }
        }
    }
    q
}
