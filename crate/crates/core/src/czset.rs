//! Constrained zonotopes `{c + G l : A l = b, |l|_inf <= 1}`.
//!
//! All operations are exact; no order reduction is applied, so generator
//! and constraint counts grow with every intersection.

use crate::error::{Error, Result};
use crate::lp::support_cz;
use crate::matops::{ensure_finite, Matrix, Vector};
use crate::polyset::HPolyhedron;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedZonotope {
    center: Vector,
    generators: Matrix,
    eq_matrix: Matrix,
    eq_rhs: Vector,
}

impl ConstrainedZonotope {
    pub fn new(center: Vector, generators: Matrix, eq_matrix: Matrix, eq_rhs: Vector) -> Result<Self> {
        if generators.nrows() != center.len()
            || eq_matrix.ncols() != generators.ncols()
            || eq_matrix.nrows() != eq_rhs.len()
        {
            return Err(Error::DimensionMismatch(format!(
                "constrained zonotope: c {}, G {}x{}, A {}x{}, b {}",
                center.len(),
                generators.nrows(),
                generators.ncols(),
                eq_matrix.nrows(),
                eq_matrix.ncols(),
                eq_rhs.len()
            )));
        }
        ensure_finite(&generators, "zonotope generators")?;
        ensure_finite(&eq_matrix, "zonotope equality matrix")?;
        if center.iter().chain(eq_rhs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("zonotope center or equality rhs"));
        }
        Ok(Self {
            center,
            generators,
            eq_matrix,
            eq_rhs,
        })
    }

    /// Plain zonotope (no equality constraints).
    pub fn zonotope(center: Vector, generators: Matrix) -> Result<Self> {
        let d = generators.ncols();
        Self::new(center, generators, Matrix::zeros(0, d), Vector::zeros(0))
    }

    pub fn from_bounds(lower: &[f64], upper: &[f64]) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidConstraintSet("box bounds".into()));
        }
        let n = lower.len();
        let center = Vector::from_fn(n, |i, _| 0.5 * (lower[i] + upper[i]));
        let half = Vector::from_fn(n, |i, _| 0.5 * (upper[i] - lower[i]));
        Self::zonotope(center, Matrix::from_diagonal(&half))
    }

    pub fn symmetric_box(radii: &[f64]) -> Result<Self> {
        let lower: Vec<f64> = radii.iter().map(|r| -r).collect();
        Self::from_bounds(&lower, radii)
    }

    /// Exact conversion of a bounded polyhedron: its bounding box plus one
    /// slack generator per row, `F (c + G xi) + s = theta` with `s` ranging
    /// over `[0, theta - min_box F x]`.
    pub fn from_hpoly(p: &HPolyhedron) -> Result<Self> {
        let n = p.dim();
        let (mut lower, mut upper) = (vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            upper[i] = crate::lp::support_hpoly(p, &e)?;
            e[i] = -1.0;
            lower[i] = -crate::lp::support_hpoly(p, &e)?;
            if upper[i].is_infinite() || lower[i].is_infinite() {
                return Err(Error::Unbounded);
            }
        }
        let bx = Self::from_bounds(&lower, &upper)?;
        let (f, theta) = (p.f(), p.theta());
        let q = f.nrows();
        let fg = f * &bx.generators;
        let fc = f * &bx.center;
        let half_slack = Vector::from_fn(q, |i, _| {
            let low = fc[i] - fg.row(i).abs().sum();
            0.5 * (theta[i] - low).max(0.0)
        });
        let mut generators = Matrix::zeros(n, n + q);
        generators.view_mut((0, 0), (n, n)).copy_from(&bx.generators);
        let mut eq = Matrix::zeros(q, n + q);
        eq.view_mut((0, 0), (q, n)).copy_from(&fg);
        for i in 0..q {
            eq[(i, n + i)] = half_slack[i];
        }
        let rhs = theta - fc - &half_slack;
        Self::new(bx.center, generators, eq, rhs)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Generator count `D`.
    pub fn num_generators(&self) -> usize {
        self.generators.ncols()
    }

    /// Equality-row count `n_c`.
    pub fn num_constraints(&self) -> usize {
        self.eq_matrix.nrows()
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn generators(&self) -> &Matrix {
        &self.generators
    }

    pub fn eq_matrix(&self) -> &Matrix {
        &self.eq_matrix
    }

    pub fn eq_rhs(&self) -> &Vector {
        &self.eq_rhs
    }

    /// Image under `x -> M x`.
    pub fn linear_map(&self, m: &Matrix) -> Result<Self> {
        if m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, set lives in R^{}",
                m.nrows(),
                m.ncols(),
                self.dim()
            )));
        }
        Self::new(
            m * &self.center,
            m * &self.generators,
            self.eq_matrix.clone(),
            self.eq_rhs.clone(),
        )
    }
}

/// `{x in z1 : M x in z2}` as `<c1, [G1 0], [A1 0; 0 A2; M G1 -G2], [b1; b2; c2 - M c1]>`.
pub fn generalized_intersect(
    z1: &ConstrainedZonotope,
    z2: &ConstrainedZonotope,
    m: &Matrix,
) -> Result<ConstrainedZonotope> {
    if m.ncols() != z1.dim() || m.nrows() != z2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, sets live in R^{} and R^{}",
            m.nrows(),
            m.ncols(),
            z1.dim(),
            z2.dim()
        )));
    }
    let (d1, d2) = (z1.num_generators(), z2.num_generators());
    let (c1, c2) = (z1.num_constraints(), z2.num_constraints());
    let n2 = z2.dim();
    let rows = c1 + c2 + n2;

    let mut generators = Matrix::zeros(z1.dim(), d1 + d2);
    generators.view_mut((0, 0), (z1.dim(), d1)).copy_from(&z1.generators);

    let mut eq = Matrix::zeros(rows, d1 + d2);
    eq.view_mut((0, 0), (c1, d1)).copy_from(&z1.eq_matrix);
    eq.view_mut((c1, d1), (c2, d2)).copy_from(&z2.eq_matrix);
    eq.view_mut((c1 + c2, 0), (n2, d1)).copy_from(&(m * &z1.generators));
    eq.view_mut((c1 + c2, d1), (n2, d2)).copy_from(&(-&z2.generators));

    let mut rhs = Vector::zeros(rows);
    rhs.rows_mut(0, c1).copy_from(&z1.eq_rhs);
    rhs.rows_mut(c1, c2).copy_from(&z2.eq_rhs);
    rhs.rows_mut(c1 + c2, n2).copy_from(&(&z2.center - m * &z1.center));

    ConstrainedZonotope::new(z1.center.clone(), generators, eq, rhs)
}

/// Intersection of two sets in the same space.
pub fn cz_intersect(z1: &ConstrainedZonotope, z2: &ConstrainedZonotope) -> Result<ConstrainedZonotope> {
    if z1.dim() != z2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "intersection of R^{} and R^{}",
            z1.dim(),
            z2.dim()
        )));
    }
    generalized_intersect(z1, z2, &Matrix::identity(z1.dim(), z1.dim()))
}

/// `X cap K^{-1} U`: states whose feedback input `K x` is admissible.
pub fn closed_loop_constraints_cz(
    x: &ConstrainedZonotope,
    uc: &ConstrainedZonotope,
    k: &Matrix,
) -> Result<ConstrainedZonotope> {
    generalized_intersect(x, uc, k)
}

/// One backward step `M_inv Z_k cap Xbar`, where `M_inv` inverts the dynamics.
pub fn cz_recurrence_step(
    zk: &ConstrainedZonotope,
    m_inv: &Matrix,
    xbar: &ConstrainedZonotope,
) -> Result<ConstrainedZonotope> {
    cz_intersect(&zk.linear_map(m_inv)?, xbar)
}

/// Whether every row of `p` bounds `z` within `tol`.
pub fn cz_contained_in_hpoly(z: &ConstrainedZonotope, p: &HPolyhedron, tol: f64) -> Result<bool> {
    if z.dim() != p.dim() {
        return Err(Error::DimensionMismatch("zonotope vs polyhedron".into()));
    }
    if crate::lp::cz_is_empty(z, tol)? {
        return Err(Error::EmptySet);
    }
    let verdicts: Vec<bool> = (0..p.num_rows())
        .into_par_iter()
        .map(|i| Ok(support_cz(z, &p.f().row(i).transpose())? <= p.theta()[i] + tol))
        .collect::<Result<_>>()?;
    Ok(verdicts.into_iter().all(|v| v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{member_cz, support_hpoly, TOL_FEAS};

    fn e(n: usize, i: usize, s: f64) -> Vector {
        let mut v = Vector::zeros(n);
        v[i] = s;
        v
    }

    #[test]
    fn unit_box_support() {
        let z = ConstrainedZonotope::symmetric_box(&[1.0, 1.0, 1.0]).unwrap();
        assert!((support_cz(&z, &Vector::from_element(3, 1.0)).unwrap() - 3.0).abs() < 1e-12);
        assert!(member_cz(&z, z.center(), TOL_FEAS).unwrap());
    }

    #[test]
    fn box_and_shifted_box() {
        let a = ConstrainedZonotope::symmetric_box(&[1.0, 1.0]).unwrap();
        let b = ConstrainedZonotope::from_bounds(&[-0.5, -1.0], &[1.5, 1.0]).unwrap();
        let z = cz_intersect(&a, &b).unwrap();
        assert!((support_cz(&z, &e(2, 0, 1.0)).unwrap() - 1.0).abs() < 1e-10);
        assert!((support_cz(&z, &e(2, 0, -1.0)).unwrap() - 0.5).abs() < 1e-10);
        assert_eq!(z.num_generators(), 4);
        assert_eq!(z.num_constraints(), 2);
    }

    #[test]
    fn scalar_input_row_is_gain_and_minus_one() {
        let x = ConstrainedZonotope::symmetric_box(&[1.0, 1.0]).unwrap();
        let u = ConstrainedZonotope::symmetric_box(&[1.0]).unwrap();
        let k = Matrix::from_row_slice(1, 2, &[-2.73, 0.8]);
        let xbar = closed_loop_constraints_cz(&x, &u, &k).unwrap();
        assert_eq!(xbar.eq_matrix(), &Matrix::from_row_slice(1, 3, &[-2.73, 0.8, -1.0]));
        assert_eq!(xbar.eq_rhs()[0], 0.0);
    }

    #[test]
    fn recurrence_counts_grow_per_step() {
        let x = ConstrainedZonotope::symmetric_box(&[1.0, 1.0]).unwrap();
        let u = ConstrainedZonotope::symmetric_box(&[1.0]).unwrap();
        let xbar = closed_loop_constraints_cz(&x, &u, &Matrix::from_row_slice(1, 2, &[0.3, 0.1])).unwrap();
        let m = Matrix::from_row_slice(2, 2, &[1.2, 0.1, 0.0, 1.1]);
        let step = cz_recurrence_step(&xbar, &m, &xbar).unwrap();
        assert_eq!(step.num_generators(), 2 * xbar.num_generators());
        assert_eq!(step.num_constraints(), 2 * xbar.num_constraints() + 2);
    }

    #[test]
    fn from_hpoly_matches_support() {
        let f = Matrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 1.0]);
        let p = HPolyhedron::new(f, Vector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let z = ConstrainedZonotope::from_hpoly(&p).unwrap();
        for k in 0..16 {
            let t = k as f64 * std::f64::consts::PI / 8.0;
            let d = Vector::from_vec(vec![t.cos(), t.sin()]);
            let (a, b) = (support_cz(&z, &d).unwrap(), support_hpoly(&p, &d).unwrap());
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn containment_in_boxes() {
        let z = ConstrainedZonotope::symmetric_box(&[1.0, 1.0]).unwrap();
        let big = HPolyhedron::symmetric_box(&[2.0, 2.0]).unwrap();
        assert!(cz_contained_in_hpoly(&z, &big, TOL_FEAS).unwrap());
        let z2 = ConstrainedZonotope::symmetric_box(&[2.0, 2.0]).unwrap();
        let small = HPolyhedron::symmetric_box(&[1.0, 1.0]).unwrap();
        assert!(!cz_contained_in_hpoly(&z2, &small, TOL_FEAS).unwrap());
    }
}
