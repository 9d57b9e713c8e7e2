//! Dense bounded-variable primal simplex on `max c^T z, M z = r, lo <= z <= hi`.

use crate::error::{Error, Result};
use crate::matops::Matrix;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const STALL_PIVOTS: usize = 50;
/// Size of the right-hand side perturbation relative to the feasibility
/// tolerance.
const PERTURBATION: f64 = 1e-2;

pub(crate) struct Standard {
    /// `m x n`, row-major
    pub a: Vec<f64>,
    pub m: usize,
    pub n: usize,
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub(crate) enum Solved {
    Optimal { z: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    m: usize,
    cols: usize,
    t: Vec<f64>,
    xb: Vec<f64>,
    basis: Vec<usize>,
    /// basis row of each column, or `usize::MAX` when nonbasic
    row_of: Vec<usize>,
    /// values of nonbasic columns
    val: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    d: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    tol_feas: f64,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn reset_costs(&mut self, cost: &[f64]) {
        for j in 0..self.cols {
            let mut dj = cost[j];
            for i in 0..self.m {
                let tij = self.at(i, j);
                if tij != 0.0 {
                    dj -= cost[self.basis[i]] * tij;
                }
            }
            self.d[j] = if self.row_of[j] == usize::MAX { dj } else { 0.0 };
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols {
            if self.row_of[j] != usize::MAX || self.lo[j] == self.hi[j] {
                continue;
            }
            let dj = self.d[j];
            let dir = if dj > COST_TOL && self.val[j] < self.hi[j] {
                1.0
            } else if dj < -COST_TOL && self.val[j] > self.lo[j] {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, _, s)| dj.abs() > s) {
                best = Some((j, dir, dj.abs()));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    /// Returns `(row, step)` for a pivot, `(usize::MAX, step)` for a bound
    /// flip of the entering column, or `None` when the step is unbounded.
    fn ratio_test(&self, j: usize, dir: f64, bland: bool) -> Option<(usize, f64)> {
        let flip = self.hi[j] - self.lo[j];
        let limit = |i: usize, alpha: f64, slack: f64| -> Option<f64> {
            let b = self.basis[i];
            if alpha > PIVOT_TOL {
                let lo = self.lo[b];
                lo.is_finite().then(|| (self.xb[i] - lo + slack) / alpha)
            } else if alpha < -PIVOT_TOL {
                let hi = self.hi[b];
                hi.is_finite().then(|| (hi - self.xb[i] + slack) / -alpha)
            } else {
                None
            }
        };

        if bland {
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let alpha = self.at(i, j) * dir;
                if let Some(ratio) = limit(i, alpha, 0.0) {
                    let ratio = ratio.max(0.0);
                    let better = match best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < br || (ratio == br && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            return match best {
                Some((_, ratio)) if flip <= ratio => Some((usize::MAX, flip)),
                Some(b) => Some(b),
                None if flip.is_finite() => Some((usize::MAX, flip)),
                None => None,
            };
        }

        // Harris two-pass: relaxed bound first, then the largest pivot
        let mut tmax = f64::INFINITY;
        for i in 0..self.m {
            if let Some(ratio) = limit(i, self.at(i, j) * dir, self.tol_feas) {
                tmax = tmax.min(ratio);
            }
        }
        if flip <= tmax {
            return if flip.is_finite() {
                Some((usize::MAX, flip))
            } else {
                None
            };
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for i in 0..self.m {
            let alpha = self.at(i, j) * dir;
            if let Some(ratio) = limit(i, alpha, 0.0) {
                if ratio <= tmax && best.is_none_or(|(_, _, a)| alpha.abs() > a) {
                    best = Some((i, ratio.max(0.0), alpha.abs()));
                }
            }
        }
        best.map(|(i, ratio, _)| (i, ratio))
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let inv = 1.0 / self.at(r, j);
        for v in &mut self.t[r * cols..(r + 1) * cols] {
            *v *= inv;
        }
        let (head, rest) = self.t.split_at_mut(r * cols);
        let (prow, tail) = rest.split_at_mut(cols);
        for row in head.chunks_exact_mut(cols).chain(tail.chunks_exact_mut(cols)) {
            let f = row[j];
            if f != 0.0 {
                for (x, p) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * p;
                }
                row[j] = 0.0;
            }
        }
        let f = self.d[j];
        if f != 0.0 {
            for (x, p) in self.d.iter_mut().zip(prow.iter()) {
                *x -= f * p;
            }
        }
        self.d[j] = 0.0;
        let leaving = self.basis[r];
        self.row_of[leaving] = usize::MAX;
        self.basis[r] = j;
        self.row_of[j] = r;
    }

    fn run(&mut self, cost: &[f64]) -> Result<Phase> {
        self.reset_costs(cost);
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= STALL_PIVOTS;
            let Some((j, dir)) = self.choose_entering(bland) else {
                return Ok(Phase::Optimal);
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::NumericalStall(self.iterations));
            }
            let Some((r, step)) = self.ratio_test(j, dir, bland) else {
                return Ok(Phase::Unbounded);
            };
            for i in 0..self.m {
                let tij = self.at(i, j);
                if tij != 0.0 {
                    self.xb[i] -= tij * dir * step;
                }
            }
            if r == usize::MAX {
                self.val[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
            } else {
                let entering_value = self.val[j] + dir * step;
                let leaving = self.basis[r];
                let alpha = self.at(r, j) * dir;
                self.val[leaving] = if alpha > 0.0 {
                    self.lo[leaving]
                } else {
                    self.hi[leaving]
                };
                self.pivot(r, j);
                self.xb[r] = entering_value;
            }
            if step <= self.tol_feas * 1e-3 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
        }
    }

    /// Recomputes basic values from the original system to shed drift.
    fn refresh(&mut self, full: &[f64], r: &[f64]) {
        let (m, cols) = (self.m, self.cols);
        if m == 0 {
            return;
        }
        let mut rhs = r.to_vec();
        for j in 0..cols {
            if self.row_of[j] == usize::MAX && self.val[j] != 0.0 {
                for (i, ri) in rhs.iter_mut().enumerate() {
                    *ri -= full[i * cols + j] * self.val[j];
                }
            }
        }
        let b = Matrix::from_fn(m, m, |i, k| full[i * cols + self.basis[k]]);
        if let Some(x) = b.lu().solve(&Matrix::from_column_slice(m, 1, &rhs)) {
            if x.iter().all(|v| v.is_finite()) {
                self.xb.copy_from_slice(x.as_slice());
            }
        }
    }
}

/// Right-hand side shifted by a tiny deterministic amount per row, which
/// breaks the ties that make degenerate programs crawl.
fn perturbed(r: &[f64], tol_feas: f64) -> Vec<f64> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    r.iter()
        .map(|&v| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            let u = 1.0 + (state >> 11) as f64 / (1u64 << 53) as f64;
            v + PERTURBATION * tol_feas * u * (1.0 + v.abs())
        })
        .collect()
}

/// Solves the perturbed program and re-evaluates its final basis on the
/// original data. Reduced costs do not depend on the right-hand side, so the
/// basis stays optimal; if its values fall outside the bounds the program is
/// solved again unperturbed.
pub(crate) fn solve_standard(p: &Standard, tol_feas: f64) -> Result<(Solved, usize)> {
    if p.m > 0 {
        let shifted = perturbed(&p.r, tol_feas);
        match solve_with(p, &shifted, tol_feas) {
            Ok((Solved::Optimal { z, value }, it)) => {
                let scale = 1.0 + p.r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
                let slack = tol_feas * scale;
                if z.iter().zip(p.lo.iter().zip(&p.hi)).all(|(v, (lo, hi))| *v >= lo - slack && *v <= hi + slack) {
                    return Ok((Solved::Optimal { z, value }, it));
                }
            }
            Ok(other) => return Ok(other),
            Err(Error::NumericalStall(_)) => {}
            Err(e) => return Err(e),
        }
    }
    solve_with(p, &p.r, tol_feas)
}

fn solve_with(p: &Standard, r_work: &[f64], tol_feas: f64) -> Result<(Solved, usize)> {
    let (m, n) = (p.m, p.n);
    let cols = n + m;
    let mut val = vec![0.0; cols];
    for j in 0..n {
        val[j] = if p.lo[j].is_finite() {
            p.lo[j]
        } else if p.hi[j].is_finite() {
            p.hi[j]
        } else {
            0.0
        };
    }
    let mut res = r_work.to_vec();
    for i in 0..m {
        for j in 0..n {
            res[i] -= p.a[i * n + j] * val[j];
        }
    }

    // original system [M | diag(sign)] kept for refreshes
    let mut full = vec![0.0; m * cols];
    for i in 0..m {
        full[i * cols..i * cols + n].copy_from_slice(&p.a[i * n..(i + 1) * n]);
        full[i * cols + n + i] = if res[i] >= 0.0 { 1.0 } else { -1.0 };
    }
    // with the artificial basis B = diag(sign), B^-1 flips row signs
    let mut t = full.clone();
    for i in 0..m {
        if res[i] < 0.0 {
            for v in &mut t[i * cols..(i + 1) * cols] {
                *v = -*v;
            }
        }
    }

    let mut lo = p.lo.clone();
    let mut hi = p.hi.clone();
    lo.extend(std::iter::repeat_n(0.0, m));
    hi.extend(std::iter::repeat_n(f64::INFINITY, m));

    let mut tab = Tableau {
        m,
        cols,
        t,
        xb: res.iter().map(|v| v.abs()).collect(),
        basis: (n..cols).collect(),
        row_of: (0..cols).map(|j| if j >= n { j - n } else { usize::MAX }).collect(),
        val,
        lo,
        hi,
        d: vec![0.0; cols],
        iterations: 0,
        max_iterations: 50 * (m + cols) + 1000,
        tol_feas,
    };

    let mut phase1 = vec![0.0; cols];
    for c in &mut phase1[n..] {
        *c = -1.0;
    }
    tab.run(&phase1)?;
    tab.refresh(&full, r_work);
    let art: f64 = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .map(|i| tab.xb[i].abs())
        .sum();
    let scale = 1.0 + p.r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if art > tol_feas * scale {
        return Ok((Solved::Infeasible, tab.iterations));
    }

    for j in n..cols {
        tab.hi[j] = 0.0;
        if tab.row_of[j] == usize::MAX {
            tab.val[j] = 0.0;
        }
    }
    let mut phase2 = p.c.clone();
    phase2.extend(std::iter::repeat_n(0.0, m));
    if let Phase::Unbounded = tab.run(&phase2)? {
        return Ok((Solved::Unbounded, tab.iterations));
    }
    tab.refresh(&full, &p.r);

    let mut z = tab.val[..n].to_vec();
    for i in 0..m {
        if tab.basis[i] < n {
            z[tab.basis[i]] = tab.xb[i];
        }
    }
    let value = z.iter().zip(&p.c).map(|(a, b)| a * b).sum();
    Ok((Solved::Optimal { z, value }, tab.iterations))
}
