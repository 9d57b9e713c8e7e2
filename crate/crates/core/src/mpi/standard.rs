use std::time::Instant;

use super::{validate_constraint_set, Branch, MpiOptions, MpiResult, MpiSet};
use crate::czset::{cz_contained_in_hpoly, cz_recurrence_step, generalized_intersect, ConstrainedZonotope};
use crate::error::{Error, Result};
use crate::matops::{eig_block_diag, ensure_square, inverse, real_schur, Matrix};
use crate::polyset::{contains_h, intersect_h, preimage_linear_h, remove_redundant, HPolyhedron};

fn ensure_invertible(a: &Matrix, eps_zero: f64) -> Result<()> {
    ensure_square(a)?;
    let f = real_schur(a, 0.0)?;
    let smallest = eig_block_diag(&f.s)?
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min);
    if smallest <= eps_zero * a.norm() {
        return Err(Error::SingularDynamics);
    }
    Ok(())
}

fn check_dims(a: &Matrix, xbar_dim: usize) -> Result<()> {
    let n = ensure_square(a)?;
    if n != xbar_dim {
        return Err(Error::DimensionMismatch(format!("A_cl is {n}x{n}, constraints live in R^{xbar_dim}")));
    }
    Ok(())
}

/// Backward recurrence `Omega_{k+1} = {x in Omega_k : A_cl x in Omega_k}`
/// in half-space form. Stops at the first `k` with `Omega_k` invariant.
pub fn mpi_standard_h(a: &Matrix, xbar: &HPolyhedron, opts: &MpiOptions) -> Result<MpiResult> {
    let start = Instant::now();
    check_dims(a, xbar.dim())?;
    ensure_invertible(a, opts.eps_zero)?;
    validate_constraint_set(xbar, opts.tol_feas)?;
    let tol = opts.tol_feas;
    let mut omega = remove_redundant(xbar, tol)?;
    for k in 0..=opts.k_max {
        let step = preimage_linear_h(&omega, a)?;
        if contains_h(&step, &omega, tol)? {
            return Ok(MpiResult {
                set: MpiSet::H(omega),
                k_bar: k,
                branch: Branch::Standard,
                wall_time: start.elapsed(),
                reduced: None,
            });
        }
        omega = remove_redundant(&intersect_h(&step, xbar)?, tol)?;
    }
    Err(Error::IterationCapExceeded(opts.k_max))
}

/// Backward recurrence `Omega_{k+1} = A_cl^-1 Omega_k cap Xbar` on
/// constrained zonotopes. `xbar_h` must describe the same set as `xbar_cz`;
/// it only feeds the termination test `Omega_k subset {F A^(k+1) x <= theta}`.
pub fn mpi_standard_cz(
    a: &Matrix,
    xbar_cz: &ConstrainedZonotope,
    xbar_h: &HPolyhedron,
    opts: &MpiOptions,
) -> Result<MpiResult> {
    let start = Instant::now();
    check_dims(a, xbar_h.dim())?;
    check_dims(a, xbar_cz.dim())?;
    ensure_invertible(a, opts.eps_zero)?;
    validate_constraint_set(xbar_h, opts.tol_feas)?;
    let a_inv = inverse(a)?;
    let mut omega = xbar_cz.clone();
    let mut power = a.clone();
    for k in 0..=opts.k_max {
        let next_rows = preimage_linear_h(xbar_h, &power)?;
        if cz_contained_in_hpoly(&omega, &next_rows, opts.tol_feas)? {
            return Ok(MpiResult {
                set: MpiSet::Cz(omega),
                k_bar: k,
                branch: Branch::Standard,
                wall_time: start.elapsed(),
                reduced: None,
            });
        }
        omega = cz_recurrence_step(&omega, &a_inv, xbar_cz)?;
        power = &power * a;
    }
    Err(Error::IterationCapExceeded(opts.k_max))
}

pub(crate) struct Forward<S> {
    pub set: S,
    /// Index of the last step that changed the set.
    pub k_bar: usize,
    pub converged: bool,
}

/// `cap_{k < steps} {F A^k x <= theta}` with redundancy removal, stopping
/// early once the rows of a step are all implied.
pub(crate) fn forward_h(a: &Matrix, xbar: &HPolyhedron, steps: usize, tol: f64) -> Result<Forward<HPolyhedron>> {
    let mut omega = remove_redundant(xbar, tol)?;
    let mut power = Matrix::identity(a.nrows(), a.ncols());
    for k in 1..steps {
        power = &power * a;
        let rows = preimage_linear_h(xbar, &power)?;
        if contains_h(&rows, &omega, tol)? {
            return Ok(Forward { set: omega, k_bar: k - 1, converged: true });
        }
        omega = remove_redundant(&intersect_h(&omega, &rows)?, tol)?;
    }
    Ok(Forward { set: omega, k_bar: steps.saturating_sub(1), converged: false })
}

/// Constrained-zonotope counterpart of [`forward_h`]: each step adds
/// `{x : A^k x in Xbar}` through a generalized intersection.
pub(crate) fn forward_cz(
    a: &Matrix,
    xbar_cz: &ConstrainedZonotope,
    xbar_h: &HPolyhedron,
    steps: usize,
    tol: f64,
) -> Result<Forward<ConstrainedZonotope>> {
    let mut omega = xbar_cz.clone();
    let mut power = Matrix::identity(a.nrows(), a.ncols());
    for k in 1..steps {
        power = &power * a;
        let rows = preimage_linear_h(xbar_h, &power)?;
        if cz_contained_in_hpoly(&omega, &rows, tol)? {
            return Ok(Forward { set: omega, k_bar: k - 1, converged: true });
        }
        omega = generalized_intersect(&omega, xbar_cz, &power)?;
    }
    Ok(Forward { set: omega, k_bar: steps.saturating_sub(1), converged: false })
}

/// `cap_k {x : A_cl^k x in Xbar}` from forward powers only, so it is defined
/// for singular `A_cl` as well. Reference answer for every other routine.
pub fn mpi_oracle_forward(a: &Matrix, xbar: &HPolyhedron, k_max: usize) -> Result<MpiResult> {
    let start = Instant::now();
    check_dims(a, xbar.dim())?;
    let opts = MpiOptions::default();
    validate_constraint_set(xbar, opts.tol_feas)?;
    let run = forward_h(a, xbar, k_max + 2, opts.tol_feas)?;
    if !run.converged {
        return Err(Error::IterationCapExceeded(k_max));
    }
    Ok(MpiResult {
        set: MpiSet::H(run.set),
        k_bar: run.k_bar,
        branch: Branch::Standard,
        wall_time: start.elapsed(),
        reduced: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::support_cz;
    use crate::matops::Vector;
    use crate::polyset::equals_h;

    fn riccati_pair() -> (Matrix, HPolyhedron) {
        // contractive rotation-like map on the unit box
        let a = Matrix::from_row_slice(2, 2, &[0.9, 0.4, -0.4, 0.6]);
        (a, HPolyhedron::symmetric_box(&[1.0, 1.0]).unwrap())
    }

    #[test]
    fn invariant_box_stops_immediately() {
        let a = Matrix::from_diagonal(&Vector::from_vec(vec![0.5, -0.3]));
        let x = HPolyhedron::symmetric_box(&[1.0, 2.0]).unwrap();
        let r = mpi_standard_h(&a, &x, &MpiOptions::default()).unwrap();
        assert_eq!(r.k_bar, 0);
        assert!(equals_h(r.set.as_h().unwrap(), &x, 1e-9).unwrap());
        let z = ConstrainedZonotope::symmetric_box(&[1.0, 2.0]).unwrap();
        assert_eq!(mpi_standard_cz(&a, &z, &x, &MpiOptions::default()).unwrap().k_bar, 0);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let x = HPolyhedron::symmetric_box(&[1.0, 1.0]).unwrap();
        assert_eq!(mpi_standard_h(&a, &x, &MpiOptions::default()), Err(Error::SingularDynamics));
    }

    #[test]
    fn oracle_agrees_with_backward_recurrence() {
        let (a, x) = riccati_pair();
        let std = mpi_standard_h(&a, &x, &MpiOptions::default()).unwrap();
        let fwd = mpi_oracle_forward(&a, &x, 100).unwrap();
        assert_eq!(std.k_bar, fwd.k_bar);
        assert!(equals_h(std.set.as_h().unwrap(), fwd.set.as_h().unwrap(), 1e-7).unwrap());
    }

    #[test]
    fn oracle_on_nilpotent_map() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        let x = HPolyhedron::symmetric_box(&[1.0, 1.0]).unwrap();
        let r = mpi_oracle_forward(&a, &x, 10).unwrap();
        assert!(r.k_bar <= 1);
        // |x1| <= 1, |x2| <= 1/2
        let d = Vector::from_vec(vec![0.0, 1.0]);
        assert!((r.set.support(&d).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn backends_agree_in_support() {
        let (a, x) = riccati_pair();
        let z = ConstrainedZonotope::symmetric_box(&[1.0, 1.0]).unwrap();
        let h = mpi_standard_h(&a, &x, &MpiOptions::default()).unwrap();
        let c = mpi_standard_cz(&a, &z, &x, &MpiOptions::default()).unwrap();
        assert_eq!(h.k_bar, c.k_bar);
        for i in 0..24 {
            let t = i as f64 * std::f64::consts::PI / 12.0;
            let d = Vector::from_vec(vec![t.cos(), t.sin()]);
            let sh = h.set.support(&d).unwrap();
            let sc = support_cz(c.set.as_cz().unwrap(), &d).unwrap();
            assert!((sh - sc).abs() < 1e-6, "{sh} vs {sc}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let (a, x) = riccati_pair();
        let opts = MpiOptions { k_max: 0, ..MpiOptions::default() };
        assert_eq!(mpi_standard_h(&a, &x, &opts), Err(Error::IterationCapExceeded(0)));
    }
}
