use super::{lp_solve, LinearProgram, LpStatus, TOL_FEAS};
use crate::czset::ConstrainedZonotope;
use crate::error::{Error, Result};
use crate::matops::{Matrix, Vector};
use crate::polyset::HPolyhedron;

/// `sup { d^T x : F x <= theta }`, `+inf` when unbounded along `d`.
///
/// Solved through the dual `min theta^T y, F^T y = d, y >= 0`, which has one
/// row per dimension rather than one per half-space.
pub fn support_hpoly(p: &HPolyhedron, d: &Vector) -> Result<f64> {
    if d.len() != p.dim() {
        return Err(Error::DimensionMismatch("support direction".into()));
    }
    if p.is_flagged_empty() {
        return Err(Error::EmptySet);
    }
    let q = p.num_rows();
    let lp = LinearProgram::new(-p.theta())
        .with_eq(p.f().transpose(), d.clone())
        .with_bounds(Vector::zeros(q), Vector::from_element(q, f64::INFINITY));
    match lp_solve(&lp, TOL_FEAS)?.status {
        LpStatus::Optimal { value, .. } => Ok(-value),
        LpStatus::Unbounded => Err(Error::EmptySet),
        LpStatus::Infeasible => {
            if hpoly_is_empty(p, TOL_FEAS)? {
                Err(Error::EmptySet)
            } else {
                Ok(f64::INFINITY)
            }
        }
    }
}

/// Farkas test: empty iff some `y >= 0` with `F^T y = 0`, `1^T y <= 1` has
/// `theta^T y < -tol`.
pub fn hpoly_is_empty(p: &HPolyhedron, tol: f64) -> Result<bool> {
    if p.is_flagged_empty() {
        return Ok(true);
    }
    let q = p.num_rows();
    if q == 0 {
        return Ok(false);
    }
    let lp = LinearProgram::new(-p.theta())
        .with_eq(p.f().transpose(), Vector::zeros(p.dim()))
        .with_ineq(Matrix::from_element(1, q, 1.0), Vector::from_element(1, 1.0))
        .with_bounds(Vector::zeros(q), Vector::from_element(q, f64::INFINITY));
    match lp_solve(&lp, TOL_FEAS)?.status {
        LpStatus::Optimal { value, .. } => Ok(-value < -tol),
        _ => Err(Error::NumericalStall(0)),
    }
}

/// Equality rows scaled to unit norm; all-zero rows are kept as `0 = b`.
fn scaled_rows(a: &Matrix, b: &Vector) -> (Matrix, Vector) {
    let mut a = a.clone();
    let mut b = b.clone();
    for i in 0..a.nrows() {
        let norm = a.row(i).norm();
        if norm > 0.0 {
            a.row_mut(i).scale_mut(1.0 / norm);
            b[i] /= norm;
        }
    }
    (a, b)
}

fn unit_box_lp(objective: Vector, a: &Matrix, b: &Vector) -> LinearProgram {
    let d = objective.len();
    let (a, b) = scaled_rows(a, b);
    LinearProgram::new(objective)
        .with_eq(a, b)
        .with_bounds(Vector::from_element(d, -1.0), Vector::from_element(d, 1.0))
}

/// `max d^T (c + G l)` over the parameter set; fails on an empty set.
pub fn support_cz(z: &ConstrainedZonotope, d: &Vector) -> Result<f64> {
    if d.len() != z.dim() {
        return Err(Error::DimensionMismatch("support direction".into()));
    }
    let lp = unit_box_lp(z.generators().transpose() * d, z.eq_matrix(), z.eq_rhs());
    match lp_solve(&lp, TOL_FEAS)?.status {
        LpStatus::Optimal { value, .. } => Ok(value + d.dot(z.center())),
        LpStatus::Infeasible => Err(Error::EmptySet),
        LpStatus::Unbounded => Err(Error::NumericalStall(0)),
    }
}

/// Feasibility of `A l = b`, `G l = x - c` over the unit box.
pub fn member_cz(z: &ConstrainedZonotope, x: &Vector, tol: f64) -> Result<bool> {
    if x.len() != z.dim() {
        return Err(Error::DimensionMismatch("membership point".into()));
    }
    let (nc, n, d) = (z.num_constraints(), z.dim(), z.num_generators());
    let mut a = Matrix::zeros(nc + n, d);
    a.view_mut((0, 0), (nc, d)).copy_from(z.eq_matrix());
    a.view_mut((nc, 0), (n, d)).copy_from(z.generators());
    let mut b = Vector::zeros(nc + n);
    b.rows_mut(0, nc).copy_from(z.eq_rhs());
    b.rows_mut(nc, n).copy_from(&(x - z.center()));
    let lp = unit_box_lp(Vector::zeros(d), &a, &b);
    Ok(matches!(lp_solve(&lp, tol)?.status, LpStatus::Optimal { .. }))
}

pub fn cz_is_empty(z: &ConstrainedZonotope, tol: f64) -> Result<bool> {
    if z.num_constraints() == 0 {
        return Ok(false);
    }
    let lp = unit_box_lp(Vector::zeros(z.num_generators()), z.eq_matrix(), z.eq_rhs());
    Ok(matches!(lp_solve(&lp, tol)?.status, LpStatus::Infeasible))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_and_halfspace_support() {
        let b = HPolyhedron::symmetric_box(&[1.0, 1.0]).unwrap();
        assert!((support_hpoly(&b, &Vector::from_vec(vec![1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        let h = HPolyhedron::new(Matrix::from_row_slice(1, 2, &[1.0, 0.0]), Vector::zeros(1)).unwrap();
        assert!(support_hpoly(&h, &Vector::from_vec(vec![1.0, 0.0])).unwrap().abs() < 1e-12);
        assert_eq!(support_hpoly(&h, &Vector::from_vec(vec![0.0, 1.0])).unwrap(), f64::INFINITY);
        let u = HPolyhedron::universe(2);
        assert_eq!(support_hpoly(&u, &Vector::from_vec(vec![0.0, 1.0])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn empty_polyhedron_is_detected() {
        let f = Matrix::from_row_slice(2, 1, &[1.0, -1.0]);
        let p = HPolyhedron::new(f, Vector::from_vec(vec![-1.0, -1.0])).unwrap();
        assert!(hpoly_is_empty(&p, TOL_FEAS).unwrap());
        assert_eq!(support_hpoly(&p, &Vector::from_vec(vec![1.0])), Err(Error::EmptySet));
        let b = HPolyhedron::symmetric_box(&[1.0]).unwrap();
        assert!(!hpoly_is_empty(&b, TOL_FEAS).unwrap());
    }

    #[test]
    fn infeasible_equality_makes_cz_empty() {
        let z = ConstrainedZonotope::new(
            Vector::zeros(1),
            Matrix::from_row_slice(1, 2, &[1.0, 0.0]),
            Matrix::from_row_slice(1, 2, &[0.0, 1.0]),
            Vector::from_vec(vec![2.0]),
        )
        .unwrap();
        assert!(cz_is_empty(&z, TOL_FEAS).unwrap());
        assert_eq!(support_cz(&z, &Vector::from_vec(vec![1.0])), Err(Error::EmptySet));
    }

    #[test]
    fn membership_respects_equality() {
        // segment {l1 = l2}: points (t, t)
        let z = ConstrainedZonotope::new(
            Vector::zeros(2),
            Matrix::identity(2, 2),
            Matrix::from_row_slice(1, 2, &[1.0, -1.0]),
            Vector::zeros(1),
        )
        .unwrap();
        assert!(member_cz(&z, &Vector::from_vec(vec![0.5, 0.5]), TOL_FEAS).unwrap());
        assert!(!member_cz(&z, &Vector::from_vec(vec![0.5, -0.5]), TOL_FEAS).unwrap());
    }
}
