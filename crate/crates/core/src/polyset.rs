//! Half-space polyhedra `{x : F x <= theta}`.
//!
//! Rows are stored with unit 2-norm so every tolerance is a distance. Rows
//! that are numerically zero are dropped at construction when they read
//! `0 <= theta_i`, and flag the set as empty when `theta_i` is negative.

use crate::error::{Error, Result};
use crate::lp::{hpoly_is_empty, support_hpoly};
use crate::matops::{ensure_finite, Matrix, Vector};
use rayon::prelude::*;

/// Row norms at or below this are treated as zero rows.
const ZERO_ROW: f64 = 1e-13;
/// Normalized rows closer than this are duplicates.
const DUPLICATE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HPolyhedron {
    f: Matrix,
    theta: Vector,
    empty: bool,
}

impl HPolyhedron {
    pub fn new(f: Matrix, theta: Vector) -> Result<Self> {
        if f.nrows() != theta.len() {
            return Err(Error::DimensionMismatch(format!(
                "F has {} rows, theta has {} entries",
                f.nrows(),
                theta.len()
            )));
        }
        ensure_finite(&f, "polyhedron F")?;
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("polyhedron theta"));
        }
        let n = f.ncols();
        let mut rows = Vec::with_capacity(f.nrows());
        let mut rhs = Vec::with_capacity(f.nrows());
        let mut empty = false;
        for i in 0..f.nrows() {
            let norm = f.row(i).norm();
            if norm <= ZERO_ROW {
                if theta[i] < 0.0 {
                    empty = true;
                }
                continue;
            }
            rows.push(f.row(i) / norm);
            rhs.push(theta[i] / norm);
        }
        let f = if rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(&rows)
        };
        Ok(Self {
            f,
            theta: Vector::from_vec(rhs),
            empty,
        })
    }

    /// All of `R^n`.
    pub fn universe(n: usize) -> Self {
        Self {
            f: Matrix::zeros(0, n),
            theta: Vector::zeros(0),
            empty: false,
        }
    }

    /// `{x : lower <= x <= upper}`.
    pub fn from_bounds(lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch("box bounds".into()));
        }
        let n = lower.len();
        let mut f = Matrix::zeros(2 * n, n);
        let mut theta = Vector::zeros(2 * n);
        for i in 0..n {
            f[(i, i)] = 1.0;
            theta[i] = upper[i];
            f[(n + i, i)] = -1.0;
            theta[n + i] = -lower[i];
        }
        Self::new(f, theta)
    }

    /// `{x : |x_i| <= r_i}`.
    pub fn symmetric_box(radii: &[f64]) -> Result<Self> {
        let lower: Vec<f64> = radii.iter().map(|r| -r).collect();
        Self::from_bounds(&lower, radii)
    }

    pub fn dim(&self) -> usize {
        self.f.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.f.nrows()
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn theta(&self) -> &Vector {
        &self.theta
    }

    /// True when construction found a row `0 <= negative`.
    pub fn is_flagged_empty(&self) -> bool {
        self.empty
    }

    pub fn contains_point(&self, x: &Vector, tol: f64) -> bool {
        !self.empty && (&self.f * x - &self.theta).iter().all(|v| *v <= tol)
    }

    /// Largest constraint violation at `x` (negative when strictly inside).
    pub fn max_violation(&self, x: &Vector) -> f64 {
        (&self.f * x - &self.theta)
            .iter()
            .fold(f64::NEG_INFINITY, |a, b| a.max(*b))
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch(format!(
                "polyhedron in R^{} vs R^{other}",
                self.dim()
            )));
        }
        Ok(())
    }
}

/// `{x : F_X x <= theta_X, F_U K x <= theta_U}`.
pub fn closed_loop_constraints_h(x: &HPolyhedron, uc: &HPolyhedron, k: &Matrix) -> Result<HPolyhedron> {
    if k.nrows() != uc.dim() || k.ncols() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "gain is {}x{}, expected {}x{}",
            k.nrows(),
            k.ncols(),
            uc.dim(),
            x.dim()
        )));
    }
    intersect_h(x, &preimage_linear_h(uc, k)?)
}

/// `{x : F M x <= theta}`; `M` need not be square or invertible.
pub fn preimage_linear_h(p: &HPolyhedron, m: &Matrix) -> Result<HPolyhedron> {
    p.check_dim(m.nrows())?;
    let mut out = HPolyhedron::new(&p.f * m, p.theta.clone())?;
    out.empty |= p.empty;
    Ok(out)
}

/// Row stacking.
pub fn intersect_h(p: &HPolyhedron, q: &HPolyhedron) -> Result<HPolyhedron> {
    p.check_dim(q.dim())?;
    let n = p.dim();
    let f = Matrix::from_fn(p.num_rows() + q.num_rows(), n, |i, j| {
        if i < p.num_rows() {
            p.f[(i, j)]
        } else {
            q.f[(i - p.num_rows(), j)]
        }
    });
    let mut theta = p.theta.as_slice().to_vec();
    theta.extend(q.theta.iter());
    Ok(HPolyhedron {
        f,
        theta: Vector::from_vec(theta),
        empty: p.empty || q.empty,
    })
}

/// Keeps the rows at `idx`, in order.
fn select(p: &HPolyhedron, idx: &[usize]) -> HPolyhedron {
    HPolyhedron {
        f: Matrix::from_fn(idx.len(), p.dim(), |i, j| p.f[(idx[i], j)]),
        theta: Vector::from_fn(idx.len(), |i, _| p.theta[idx[i]]),
        empty: p.empty,
    }
}

/// Whether row `i` of `p` is implied by the rows in `others`.
fn row_is_redundant(p: &HPolyhedron, i: usize, others: &[usize], tol: f64) -> Result<bool> {
    // relaxing row i keeps the program bounded in its own direction
    let mut idx: Vec<usize> = others.iter().copied().filter(|&k| k != i).collect();
    idx.push(i);
    let mut sub = select(p, &idx);
    let last = idx.len() - 1;
    sub.theta[last] += 1.0;
    let value = support_hpoly(&sub, &p.f.row(i).transpose())?;
    Ok(value <= p.theta[i] + tol)
}

/// Drops every row whose removal leaves the set unchanged (within `tol`).
///
/// Duplicates are merged first, then each row is screened in parallel
/// against all the others. Rows that survive the screen are irredundant in
/// any subset; the remaining candidates are decided one at a time against
/// the rows still kept, so mutually redundant pairs keep one member.
pub fn remove_redundant(p: &HPolyhedron, tol: f64) -> Result<HPolyhedron> {
    if p.empty || hpoly_is_empty(p, tol)? {
        return Err(Error::EmptySet);
    }
    let q = p.num_rows();
    let mut keep: Vec<usize> = Vec::with_capacity(q);
    'rows: for i in 0..q {
        for slot in keep.iter_mut() {
            if (p.f.row(i) - p.f.row(*slot)).norm() <= DUPLICATE {
                if p.theta[i] < p.theta[*slot] {
                    *slot = i;
                }
                continue 'rows;
            }
        }
        keep.push(i);
    }

    let screened: Vec<bool> = keep
        .par_iter()
        .map(|&i| row_is_redundant(p, i, &keep, tol))
        .collect::<Result<_>>()?;
    let mut alive = vec![true; keep.len()];
    for (pos, &candidate) in screened.iter().enumerate() {
        if !candidate {
            continue;
        }
        let others: Vec<usize> = keep
            .iter()
            .zip(&alive)
            .enumerate()
            .filter(|&(k, (_, &a))| a && k != pos)
            .map(|(_, (&r, _))| r)
            .collect();
        if row_is_redundant(p, keep[pos], &others, tol)? {
            alive[pos] = false;
        }
    }
    let kept: Vec<usize> = keep
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(&r, _)| r)
        .collect();
    Ok(select(p, &kept))
}

/// `q` is a subset of `p`: every row of `p` bounds `q` within `tol`.
pub fn contains_h(p: &HPolyhedron, q: &HPolyhedron, tol: f64) -> Result<bool> {
    p.check_dim(q.dim())?;
    if q.empty || hpoly_is_empty(q, tol)? {
        return Err(Error::EmptySet);
    }
    let verdicts: Vec<bool> = (0..p.num_rows())
        .into_par_iter()
        .map(|i| Ok(support_hpoly(q, &p.f.row(i).transpose())? <= p.theta[i] + tol))
        .collect::<Result<_>>()?;
    Ok(verdicts.into_iter().all(|v| v))
}

/// Mutual containment.
pub fn equals_h(p: &HPolyhedron, q: &HPolyhedron, tol: f64) -> Result<bool> {
    Ok(contains_h(p, q, tol)? && contains_h(q, p, tol)?)
}

/// Vertex enumeration for `n <= 3`: every `n`-subset of rows is solved and
/// the feasible intersection points are kept. 2D vertices come back
/// counter-clockwise.
pub fn vertices_lowdim(p: &HPolyhedron, tol: f64) -> Result<Vec<Vector>> {
    let n = p.dim();
    if n > 3 {
        return Err(Error::DimensionTooHigh(n));
    }
    if p.empty || hpoly_is_empty(p, tol)? {
        return Err(Error::EmptySet);
    }
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut d = Vector::zeros(n);
            d[i] = s;
            if support_hpoly(p, &d)?.is_infinite() {
                return Err(Error::Unbounded);
            }
        }
    }
    if n == 0 {
        return Ok(vec![Vector::zeros(0)]);
    }
    let q = p.num_rows();
    let mut combos: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, q: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..q {
            cur.push(i);
            rec(i + 1, q, n, cur, out);
            cur.pop();
        }
    }
    rec(0, q, n, &mut cur, &mut combos);

    let scale = 1.0 + p.theta.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let found: Vec<Vector> = combos
        .par_iter()
        .filter_map(|rows| {
            let a = Matrix::from_fn(n, n, |i, j| p.f[(rows[i], j)]);
            let b = Vector::from_fn(n, |i, _| p.theta[rows[i]]);
            let lu = a.lu();
            let u = lu.u();
            let diag: Vec<f64> = (0..n).map(|i| u[(i, i)].abs()).collect();
            if diag.iter().cloned().fold(f64::INFINITY, f64::min) <= 1e-10 {
                return None;
            }
            let x = lu.solve(&b)?;
            (p.max_violation(&x) <= tol * scale).then_some(x)
        })
        .collect();

    let mut verts: Vec<Vector> = Vec::new();
    for v in found {
        if !verts.iter().any(|w| (w - &v).norm() <= 1e-7 * scale) {
            verts.push(v);
        }
    }
    if n == 2 && !verts.is_empty() {
        let cx = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
        let cy = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
        verts.sort_by(|a, b| {
            let ta = (a[1] - cy).atan2(a[0] - cx);
            let tb = (b[1] - cy).atan2(b[0] - cx);
            ta.total_cmp(&tb)
        });
    }
    Ok(verts)
}
