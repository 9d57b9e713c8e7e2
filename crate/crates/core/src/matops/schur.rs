use super::{ensure_finite, ensure_square, hessenberg, Matrix};
use crate::error::{Error, Result};

/// Real Schur factorization `A = U S U^T`.
///
/// `S` is quasi-upper-triangular with 1x1 blocks and standardized 2x2 blocks
/// (equal diagonal, off-diagonals of opposite sign), so every 2x2 block
/// carries a complex-conjugate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurFactorization {
    pub u: Matrix,
    pub s: Matrix,
}

impl SchurFactorization {
    /// `||U S U^T - A||_F`.
    pub fn reconstruction_error(&self, a: &Matrix) -> f64 {
        (&self.u * &self.s * self.u.transpose() - a).norm()
    }
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Real Schur form by Hessenberg reduction followed by the Francis implicit
/// double-shift QR iteration.
///
/// `tol` is the relative deflation threshold; pass `0.0` for machine epsilon.
pub fn real_schur(a: &Matrix, tol: f64) -> Result<SchurFactorization> {
    let n = ensure_square(a)?;
    ensure_finite(a, "real_schur input")?;
    let tol = if tol > 0.0 { tol } else { f64::EPSILON };
    let (mut u, mut h) = hessenberg(a)?;
    if n == 0 {
        return Ok(SchurFactorization { u, s: h });
    }
    let hnorm = h.norm();

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        // locate the top of the unreduced block ending at `hi`
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].abs();
            let diag = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if sub <= tol * diag || sub <= tol * hnorm {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == hi {
            iter = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if l + 1 == hi {
            standardize_block(&mut h, &mut u, l, tol * hnorm);
            iter = 0;
            if hi < 2 {
                break;
            }
            hi -= 2;
            continue;
        }

        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::NoConvergence("Francis QR iteration"));
        }
        let (s, t) = if iter % 10 == 0 {
            // exceptional shift
            let e = h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs();
            (1.5 * e, 0.4375 * e * e)
        } else {
            let (p, q, r, w) = (
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            (p + w, p * w - q * r)
        };
        francis_step(&mut h, &mut u, l, hi, s, t);
    }

    for j in 0..n {
        for i in j + 2..n {
            h[(i, j)] = 0.0;
        }
    }
    Ok(SchurFactorization { u, s: h })
}

fn householder(w: &[f64]) -> Option<(Vec<f64>, f64)> {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tail: f64 = w[1..].iter().map(|x| x * x).sum();
    if norm == 0.0 || tail == 0.0 {
        return None;
    }
    let mut v = w.to_vec();
    v[0] += if w[0] >= 0.0 { norm } else { -norm };
    let beta = 2.0 / v.iter().map(|x| x * x).sum::<f64>();
    Some((v, beta))
}

fn reflect_rows(m: &mut Matrix, k: usize, v: &[f64], beta: f64, cols: std::ops::Range<usize>) {
    for j in cols {
        let dot: f64 = v.iter().enumerate().map(|(i, vi)| vi * m[(k + i, j)]).sum();
        let f = beta * dot;
        for (i, vi) in v.iter().enumerate() {
            m[(k + i, j)] -= f * vi;
        }
    }
}

fn reflect_cols(m: &mut Matrix, k: usize, v: &[f64], beta: f64, rows: std::ops::Range<usize>) {
    for i in rows {
        let dot: f64 = v.iter().enumerate().map(|(j, vj)| m[(i, k + j)] * vj).sum();
        let f = beta * dot;
        for (j, vj) in v.iter().enumerate() {
            m[(i, k + j)] -= f * vj;
        }
    }
}

/// One implicit double-shift sweep on the active window `l..=m` (at least 3x3).
fn francis_step(h: &mut Matrix, u: &mut Matrix, l: usize, m: usize, s: f64, t: f64) {
    let n = h.nrows();
    let mut x = h[(l, l)] * h[(l, l)] + h[(l, l + 1)] * h[(l + 1, l)] - s * h[(l, l)] + t;
    let mut y = h[(l + 1, l)] * (h[(l, l)] + h[(l + 1, l + 1)] - s);
    let mut z = h[(l + 1, l)] * h[(l + 2, l + 1)];
    for k in l..=m - 2 {
        if let Some((v, beta)) = householder(&[x, y, z]) {
            let c0 = if k > l { k - 1 } else { l };
            reflect_rows(h, k, &v, beta, c0..n);
            reflect_cols(h, k, &v, beta, 0..(k + 4).min(m + 1));
            reflect_cols(u, k, &v, beta, 0..n);
            if k > l {
                h[(k + 1, k - 1)] = 0.0;
                h[(k + 2, k - 1)] = 0.0;
            }
        }
        x = h[(k + 1, k)];
        y = h[(k + 2, k)];
        if k + 3 <= m {
            z = h[(k + 3, k)];
        }
    }
    if let Some((v, beta)) = householder(&[x, y]) {
        reflect_rows(h, m - 1, &v, beta, (m - 2)..n);
        reflect_cols(h, m - 1, &v, beta, 0..m + 1);
        reflect_cols(u, m - 1, &v, beta, 0..n);
        h[(m, m - 2)] = 0.0;
    }
}

/// Applies the 2x2 rotation `R = [[cs, -sn], [sn, cs]]` as the similarity
/// `S <- R^T S R` on rows/cols `k, k+1`, and `U <- U R`.
pub(super) fn rotate_pair(s: &mut Matrix, u: &mut Matrix, k: usize, cs: f64, sn: f64) {
    let n = s.nrows();
    for j in 0..n {
        let (a, b) = (s[(k, j)], s[(k + 1, j)]);
        s[(k, j)] = cs * a + sn * b;
        s[(k + 1, j)] = -sn * a + cs * b;
    }
    for i in 0..n {
        let (a, b) = (s[(i, k)], s[(i, k + 1)]);
        s[(i, k)] = cs * a + sn * b;
        s[(i, k + 1)] = -sn * a + cs * b;
        let (a, b) = (u[(i, k)], u[(i, k + 1)]);
        u[(i, k)] = cs * a + sn * b;
        u[(i, k + 1)] = -sn * a + cs * b;
    }
}

/// Standardizes the 2x2 diagonal block at `k`: real eigenvalues are split into
/// two 1x1 blocks, complex pairs get equal diagonal entries.
///
/// A complex pair whose subdiagonal is at most `negligible` is split as well.
/// Defective eigenvalues (a perturbed Jordan cell) otherwise surface as a
/// pair of modulus `sqrt(|b c|)`, far above the backward error.
pub(super) fn standardize_block(s: &mut Matrix, u: &mut Matrix, k: usize, negligible: f64) {
    let (a, b, c, d) = (s[(k, k)], s[(k, k + 1)], s[(k + 1, k)], s[(k + 1, k + 1)]);
    let std = lanv2(a, b, c, d);
    rotate_pair(s, u, k, std.cs, std.sn);
    s[(k, k)] = std.a;
    s[(k, k + 1)] = std.b;
    s[(k + 1, k)] = if std.c.abs() <= negligible { 0.0 } else { std.c };
    s[(k + 1, k + 1)] = std.d;
}

struct Standard2x2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    cs: f64,
    sn: f64,
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Schur factorization of a real 2x2 nonsymmetric matrix in standardized
/// form (the LAPACK `dlanv2` construction).
fn lanv2(mut a: f64, mut b: f64, mut c: f64, mut d: f64) -> Standard2x2 {
    const MULTPL: f64 = 4.0;
    let eps = f64::EPSILON;
    let (mut cs, mut sn);
    if c == 0.0 {
        cs = 1.0;
        sn = 0.0;
    } else if b == 0.0 {
        cs = 0.0;
        sn = 1.0;
        std::mem::swap(&mut a, &mut d);
        b = -c;
        c = 0.0;
    } else if a - d == 0.0 && b.signum() != c.signum() {
        cs = 1.0;
        sn = 0.0;
    } else {
        let temp = a - d;
        let mut p = 0.5 * temp;
        let bcmax = b.abs().max(c.abs());
        let bcmis = b.abs().min(c.abs()) * b.signum() * c.signum();
        let scale = p.abs().max(bcmax);
        let mut z = p / scale * p + bcmax / scale * bcmis;
        if z >= MULTPL * eps {
            // real eigenvalues
            z = p + sign(scale.sqrt() * z.sqrt(), p);
            a = d + z;
            d -= bcmax / z * bcmis;
            let tau = c.hypot(z);
            cs = z / tau;
            sn = c / tau;
            b -= c;
            c = 0.0;
        } else {
            // complex or almost equal real eigenvalues: equalize the diagonal
            let sigma = b + c;
            let tau = sigma.hypot(temp);
            cs = (0.5 * (1.0 + sigma.abs() / tau)).sqrt();
            sn = -(p / (tau * cs)) * sign(1.0, sigma);

            let aa = a * cs + b * sn;
            let bb = -a * sn + b * cs;
            let cc = c * cs + d * sn;
            let dd = -c * sn + d * cs;

            a = aa * cs + cc * sn;
            b = bb * cs + dd * sn;
            c = -aa * sn + cc * cs;
            d = -bb * sn + dd * cs;

            let temp = 0.5 * (a + d);
            a = temp;
            d = temp;

            if c != 0.0 {
                if b != 0.0 {
                    if b.signum() == c.signum() {
                        // real eigenvalues after all: triangularize
                        let sab = b.abs().sqrt();
                        let sac = c.abs().sqrt();
                        p = sign(sab * sac, c);
                        let tau = 1.0 / (b + c).abs().sqrt();
                        a = temp + p;
                        d = temp - p;
                        b -= c;
                        c = 0.0;
                        let cs1 = sab * tau;
                        let sn1 = sac * tau;
                        let t = cs * cs1 - sn * sn1;
                        sn = cs * sn1 + sn * cs1;
                        cs = t;
                    }
                } else {
                    b = -c;
                    c = 0.0;
                    let t = cs;
                    cs = -sn;
                    sn = t;
                }
            }
        }
    }
    Standard2x2 { a, b, c, d, cs, sn }
}
