use std::time::Instant;

use super::standard::{forward_cz, forward_h, mpi_standard_cz, mpi_standard_h};
use super::{
    reduced_constraints_cz, reduced_constraints_h, schur_split, validate_constraint_set, Branch, MpiOptions,
    MpiResult, MpiSet, ReducedRun, SchurSplit,
};
use crate::czset::{generalized_intersect, ConstrainedZonotope};
use crate::error::{Error, Result};
use crate::matops::Matrix;
use crate::polyset::{intersect_h, remove_redundant, HPolyhedron};

/// `S22^h` counts as exactly zero once it is within rounding of a nilpotent
/// matrix: `||S22^h|| <= EXACT_NIL_RTOL * ||A|| * ||S22||^(h-1)`.
const EXACT_NIL_RTOL: f64 = 1e-12;

/// Forward steps before the reduced dynamics take over. Starts at
/// `p + p_offset` and grows (up to `d2`) while `S22^h` is only zero to
/// within `tol_nil`; the coupling map multiplies that residue by `T`.
fn horizon(split: &SchurSplit, opts: &MpiOptions) -> usize {
    if split.d1 == 0 {
        // dead-beat: A^(p+1) = 0, the forward intersection is the answer
        return split.p + 1;
    }
    let mut h = (split.p + opts.p_offset).max(1);
    let (anorm, snorm) = (split.s().norm(), split.s22.norm());
    let mut pw = crate::matops::mat_power(&split.s22, h).unwrap_or_else(|_| split.s22.clone());
    while h < split.d2 && pw.norm() > EXACT_NIL_RTOL * anorm * snorm.powi(h as i32 - 1) {
        pw = &pw * &split.s22;
        h += 1;
    }
    h
}

fn run_info(split: &SchurSplit, horizon: usize, k_bar_z: Option<usize>, phi_z: Option<MpiSet>) -> ReducedRun {
    ReducedRun {
        d1: split.d1,
        d2: split.d2,
        p: split.p,
        horizon,
        k_bar_z,
        phi_z,
    }
}

/// `{x : F_z L x <= theta_z}` for the reduced invariant set `{F_z z <= theta_z}`
/// and the coupling `L` of [`SchurSplit::coupling`]. Unbounded along the
/// nilpotent directions on its own.
pub fn lifted_reduced_set(split: &SchurSplit, phi_z: &HPolyhedron, horizon: usize) -> Result<HPolyhedron> {
    let l = split.coupling(horizon)?;
    HPolyhedron::new(phi_z.f() * l, phi_z.theta().clone())
}

/// Invariant set for `A_cl` with zero eigenvalues, half-space form.
///
/// The first `h` steps are imposed on the full dynamics. After that the
/// nilpotent part has died out and the state evolves as `z+ = S11 z` on the
/// reduced coordinates, whose invariant set is computed by the backward
/// recurrence and pulled back through the coupling map.
pub fn mpi_singular_h(a: &Matrix, xbar: &HPolyhedron, opts: &MpiOptions) -> Result<MpiResult> {
    let start = Instant::now();
    opts.validate()?;
    validate_constraint_set(xbar, opts.tol_feas)?;
    let split = schur_split(a, opts.eps_zero, opts.tol_nil)?;
    let h = horizon(&split, opts);
    let head = forward_h(a, xbar, h, opts.tol_feas)?;
    if head.converged || split.d1 == 0 {
        return Ok(MpiResult {
            set: MpiSet::H(head.set),
            k_bar: head.k_bar,
            branch: Branch::Singular,
            wall_time: start.elapsed(),
            reduced: Some(run_info(&split, h, None, None)),
        });
    }

    let z = reduced_constraints_h(&split, xbar)?;
    let reduced = mpi_standard_h(&split.s11, &z, opts)?;
    let phi_z = reduced.set.as_h().ok_or(Error::EmptySet)?;
    let tail = lifted_reduced_set(&split, phi_z, h)?;
    let set = remove_redundant(&intersect_h(&head.set, &tail)?, opts.tol_feas)?;
    Ok(MpiResult {
        set: MpiSet::H(set),
        k_bar: reduced.k_bar,
        branch: Branch::Singular,
        wall_time: start.elapsed(),
        reduced: Some(run_info(&split, h, Some(reduced.k_bar), Some(reduced.set))),
    })
}

/// Constrained-zonotope counterpart of [`mpi_singular_h`]. The reduced set
/// comes from [`reduced_constraints_cz`] and is attached to the forward part
/// by a generalized intersection through the coupling map.
pub fn mpi_singular_cz(
    a: &Matrix,
    xbar_cz: &ConstrainedZonotope,
    xbar_h: &HPolyhedron,
    opts: &MpiOptions,
) -> Result<MpiResult> {
    let start = Instant::now();
    opts.validate()?;
    validate_constraint_set(xbar_h, opts.tol_feas)?;
    if xbar_cz.dim() != xbar_h.dim() {
        return Err(Error::DimensionMismatch("zonotope and half-space forms differ in dimension".into()));
    }
    let split = schur_split(a, opts.eps_zero, opts.tol_nil)?;
    let h = horizon(&split, opts);
    let head = forward_cz(a, xbar_cz, xbar_h, h, opts.tol_feas)?;
    if head.converged || split.d1 == 0 {
        return Ok(MpiResult {
            set: MpiSet::Cz(head.set),
            k_bar: head.k_bar,
            branch: Branch::Singular,
            wall_time: start.elapsed(),
            reduced: Some(run_info(&split, h, None, None)),
        });
    }

    let z_cz = reduced_constraints_cz(&split, xbar_cz)?;
    let z_h = reduced_constraints_h(&split, xbar_h)?;
    let reduced = mpi_standard_cz(&split.s11, &z_cz, &z_h, opts)?;
    let phi_z = reduced.set.as_cz().ok_or(Error::EmptySet)?;
    let set = generalized_intersect(&head.set, phi_z, &split.coupling(h)?)?;
    Ok(MpiResult {
        set: MpiSet::Cz(set),
        k_bar: reduced.k_bar,
        branch: Branch::Singular,
        wall_time: start.elapsed(),
        reduced: Some(run_info(&split, h, Some(reduced.k_bar), Some(reduced.set))),
    })
}
