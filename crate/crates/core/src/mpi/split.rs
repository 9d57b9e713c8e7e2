use crate::czset::ConstrainedZonotope;
use crate::error::{Error, Result};
use crate::matops::{
    mat_power, order_schur_zeros_last, real_schur, solve, trailing_zero_dim, Matrix,
};
use crate::polyset::HPolyhedron;

/// Ordered Schur split `A = U [[S11, S12], [0, S22]] U^T` with every zero
/// eigenvalue in the nilpotent block `S22`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurSplit {
    pub u: Matrix,
    pub s11: Matrix,
    pub s12: Matrix,
    pub s22: Matrix,
    pub d1: usize,
    pub d2: usize,
    /// Smallest `p` with `S22^(p+1)` numerically zero.
    pub p: usize,
    /// `sum_{i=0..=p} S11^-i S12 S22^i`.
    pub t: Matrix,
}

impl SchurSplit {
    /// Leading `d1` columns of `U`.
    pub fn u1(&self) -> Matrix {
        self.u.columns(0, self.d1).into_owned()
    }

    /// Trailing `d2` columns of `U`.
    pub fn u2(&self) -> Matrix {
        self.u.columns(self.d1, self.d2).into_owned()
    }

    /// Reassembled quasi-triangular factor.
    pub fn s(&self) -> Matrix {
        let n = self.d1 + self.d2;
        let mut s = Matrix::zeros(n, n);
        s.view_mut((0, 0), (self.d1, self.d1)).copy_from(&self.s11);
        s.view_mut((0, self.d1), (self.d1, self.d2)).copy_from(&self.s12);
        s.view_mut((self.d1, self.d1), (self.d2, self.d2)).copy_from(&self.s22);
        s
    }

    /// Coupling map `[S11^h, S11^(h-1) T] U^T` sending `x` to the reduced
    /// state `h` steps ahead; `h >= 1`.
    pub fn coupling(&self, horizon: usize) -> Result<Matrix> {
        let h = horizon.max(1);
        let left = mat_power(&self.s11, h)?;
        let right = mat_power(&self.s11, h - 1)? * &self.t;
        let mut l = Matrix::zeros(self.d1, self.d1 + self.d2);
        l.view_mut((0, 0), (self.d1, self.d1)).copy_from(&left);
        l.view_mut((0, self.d1), (self.d1, self.d2)).copy_from(&right);
        Ok(l * self.u.transpose())
    }
}

pub fn schur_split(a: &Matrix, eps_zero: f64, tol_nil: f64) -> Result<SchurSplit> {
    let f = order_schur_zeros_last(&real_schur(a, 0.0)?, eps_zero)?;
    let n = a.nrows();
    let d2 = trailing_zero_dim(&f.s, eps_zero);
    if d2 == 0 {
        return Err(Error::NoZeroEigenvalues);
    }
    let d1 = n - d2;
    let s11 = f.s.view((0, 0), (d1, d1)).into_owned();
    let s12 = f.s.view((0, d1), (d1, d2)).into_owned();
    let s22 = f.s.view((d1, d1), (d2, d2)).into_owned();

    let tol = tol_nil * a.norm();
    let mut p = None;
    let mut pw = s22.clone();
    for k in 0..d2 {
        if pw.norm() <= tol {
            p = Some(k);
            break;
        }
        pw = &pw * &s22;
    }
    let p = p.ok_or(Error::NotNilpotent {
        power: d2,
        norm: pw.norm(),
    })?;

    let mut split = SchurSplit {
        u: f.u,
        s11,
        s12,
        s22,
        d1,
        d2,
        p,
        t: Matrix::zeros(d1, d2),
    };
    split.t = compute_t(&split)?;
    Ok(split)
}

/// `T = sum_{i=0..=p} S11^-i S12 S22^i`, built term by term as
/// `S11^-1 (previous term) S22`.
pub fn compute_t(split: &SchurSplit) -> Result<Matrix> {
    let mut term = split.s12.clone();
    let mut t = term.clone();
    if split.d1 == 0 {
        return Ok(t);
    }
    for _ in 0..split.p {
        term = solve(&split.s11, &(term * &split.s22))?;
        t += &term;
    }
    Ok(t)
}

/// `{z : F U1 z <= theta}`.
pub fn reduced_constraints_h(split: &SchurSplit, xbar: &HPolyhedron) -> Result<HPolyhedron> {
    HPolyhedron::new(xbar.f() * split.u1(), xbar.theta().clone())
}

/// `<U1^T c, U1^T G, [A; U2^T G], [b; -U2^T c]>`: the points of `Xbar` with
/// no component along the nilpotent subspace, in reduced coordinates.
pub fn reduced_constraints_cz(split: &SchurSplit, xbar: &ConstrainedZonotope) -> Result<ConstrainedZonotope> {
    let (u1, u2) = (split.u1(), split.u2());
    let g = xbar.generators();
    let (nc, d) = (xbar.num_constraints(), xbar.num_generators());
    let mut eq = Matrix::zeros(nc + split.d2, d);
    eq.view_mut((0, 0), (nc, d)).copy_from(xbar.eq_matrix());
    eq.view_mut((nc, 0), (split.d2, d)).copy_from(&(u2.transpose() * g));
    let mut rhs = crate::matops::Vector::zeros(nc + split.d2);
    rhs.rows_mut(0, nc).copy_from(xbar.eq_rhs());
    rhs.rows_mut(nc, split.d2).copy_from(&(-(u2.transpose() * xbar.center())));
    ConstrainedZonotope::new(u1.transpose() * xbar.center(), u1.transpose() * g, eq, rhs)
}
