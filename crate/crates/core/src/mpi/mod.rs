//! Maximal positively invariant sets of `x+ = A_cl x` subject to `x in Xbar`.
//!
//! [`mpi_standard_h`] and [`mpi_standard_cz`] run the backward recurrence and
//! need an invertible `A_cl`. [`mpi_singular_h`] and [`mpi_singular_cz`]
//! handle zero eigenvalues through [`schur_split`]. [`mpi_oracle_forward`]
//! intersects forward preimages only and is used as the reference answer.

mod singular;
mod split;
mod standard;

use std::time::Duration;

use crate::czset::{closed_loop_constraints_cz, ConstrainedZonotope};
use crate::error::{Error, Result};
use crate::lp::support_hpoly;
use crate::matops::{ensure_finite, ensure_square, Matrix, Vector};
use crate::polyset::{closed_loop_constraints_h, HPolyhedron};

pub use singular::{lifted_reduced_set, mpi_singular_cz, mpi_singular_h};
pub use split::{compute_t, reduced_constraints_cz, reduced_constraints_h, schur_split, SchurSplit};
pub use standard::{mpi_oracle_forward, mpi_standard_cz, mpi_standard_h};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpiOptions {
    /// Eigenvalues below `eps_zero * ||A||_F` count as zero.
    pub eps_zero: f64,
    /// `S22^k` is zero once `||S22^k||_F <= tol_nil * ||A||_F`.
    pub tol_nil: f64,
    /// LP feasibility and containment tolerance.
    pub tol_feas: f64,
    pub k_max: usize,
    /// Extra forward steps on top of the minimal nilpotency index. The
    /// horizon is lengthened further until `S22^h` vanishes to rounding, so
    /// `0` is always safe; larger values only add rows.
    pub p_offset: usize,
    /// `A_cl = A + sigma B K`, `sigma` is `1` or `-1`.
    pub sigma: i32,
}

impl Default for MpiOptions {
    fn default() -> Self {
        Self {
            eps_zero: 1e-9,
            tol_nil: 1e-9,
            tol_feas: 1e-8,
            k_max: 500,
            p_offset: 0,
            sigma: 1,
        }
    }
}

impl MpiOptions {
    pub fn validate(&self) -> Result<()> {
        if self.sigma != 1 && self.sigma != -1 {
            return Err(Error::InvalidParams(format!("sigma must be 1 or -1, got {}", self.sigma)));
        }
        for (name, v) in [("eps_zero", self.eps_zero), ("tol_nil", self.tol_nil), ("tol_feas", self.tol_feas)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// State or input constraints in both set representations. The CZ backend
/// still needs the half-space form for its termination test.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub h: HPolyhedron,
    pub cz: ConstrainedZonotope,
}

impl ConstraintSet {
    pub fn from_bounds(lower: &[f64], upper: &[f64]) -> Result<Self> {
        Ok(Self {
            h: HPolyhedron::from_bounds(lower, upper)?,
            cz: ConstrainedZonotope::from_bounds(lower, upper)?,
        })
    }

    pub fn symmetric_box(radii: &[f64]) -> Result<Self> {
        let lower: Vec<f64> = radii.iter().map(|r| -r).collect();
        Self::from_bounds(&lower, radii)
    }

    /// The CZ form is built from a bounding box plus slack generators.
    pub fn from_hpoly(h: HPolyhedron) -> Result<Self> {
        let cz = ConstrainedZonotope::from_hpoly(&h)?;
        Ok(Self { h, cz })
    }

    pub fn from_parts(h: HPolyhedron, cz: ConstrainedZonotope) -> Result<Self> {
        if h.dim() != cz.dim() {
            return Err(Error::DimensionMismatch(format!(
                "half-space form in R^{}, zonotope in R^{}",
                h.dim(),
                cz.dim()
            )));
        }
        Ok(Self { h, cz })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Hpoly,
    Czono,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Standard,
    Singular,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Standard => "standard",
            Branch::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MpiSet {
    H(HPolyhedron),
    Cz(ConstrainedZonotope),
}

impl MpiSet {
    pub fn dim(&self) -> usize {
        match self {
            MpiSet::H(p) => p.dim(),
            MpiSet::Cz(z) => z.dim(),
        }
    }

    pub fn as_h(&self) -> Option<&HPolyhedron> {
        match self {
            MpiSet::H(p) => Some(p),
            MpiSet::Cz(_) => None,
        }
    }

    pub fn as_cz(&self) -> Option<&ConstrainedZonotope> {
        match self {
            MpiSet::Cz(z) => Some(z),
            MpiSet::H(_) => None,
        }
    }

    pub fn support(&self, d: &Vector) -> Result<f64> {
        match self {
            MpiSet::H(p) => support_hpoly(p, d),
            MpiSet::Cz(z) => crate::lp::support_cz(z, d),
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        match self {
            MpiSet::H(p) => Ok(p.contains_point(x, tol)),
            MpiSet::Cz(z) => crate::lp::member_cz(z, x, tol),
        }
    }
}

/// Size of the computed set: `q_bar` half-spaces, or `D` generators and
/// `n_c` equality constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCount {
    Inequalities(usize),
    Generators { generators: usize, constraints: usize },
}

/// Bookkeeping of the singular branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRun {
    pub d1: usize,
    pub d2: usize,
    /// Minimal nilpotency index.
    pub p: usize,
    /// Forward steps taken on the full dynamics before the reduced set
    /// takes over.
    pub horizon: usize,
    /// Termination index of the reduced recurrence; `None` when the forward
    /// steps already reached the fixed point or the dynamics are dead-beat.
    pub k_bar_z: Option<usize>,
    pub phi_z: Option<MpiSet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpiResult {
    pub set: MpiSet,
    /// Termination index: `Omega_{k_bar} = Omega_{k_bar + 1}`. On the
    /// singular branch this is the reduced run's index when it ran.
    pub k_bar: usize,
    pub branch: Branch,
    pub wall_time: Duration,
    pub reduced: Option<ReducedRun>,
}

impl MpiResult {
    pub fn row_count(&self) -> RowCount {
        match &self.set {
            MpiSet::H(p) => RowCount::Inequalities(p.num_rows()),
            MpiSet::Cz(z) => RowCount::Generators {
                generators: z.num_generators(),
                constraints: z.num_constraints(),
            },
        }
    }

    pub fn q_bar(&self) -> Option<usize> {
        self.set.as_h().map(HPolyhedron::num_rows)
    }
}

/// `Xbar` must be bounded and hold the origin in its interior.
pub(crate) fn validate_constraint_set(xbar: &HPolyhedron, tol: f64) -> Result<()> {
    if xbar.is_flagged_empty() {
        return Err(Error::InvalidConstraintSet("set is empty".into()));
    }
    if let Some(i) = xbar.theta().iter().position(|&t| t <= tol) {
        return Err(Error::InvalidConstraintSet(format!(
            "origin is not interior (row {i} has offset {})",
            xbar.theta()[i]
        )));
    }
    let n = xbar.dim();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut d = Vector::zeros(n);
            d[i] = s;
            if !support_hpoly(xbar, &d)?.is_finite() {
                return Err(Error::InvalidConstraintSet(format!("unbounded along {}e{i}", if s > 0.0 { "+" } else { "-" })));
            }
        }
    }
    Ok(())
}

/// `A + sigma B K`.
pub fn closed_loop_matrix(a: &Matrix, b: &Matrix, k: &Matrix, sigma: i32) -> Result<Matrix> {
    let n = ensure_square(a)?;
    if b.nrows() != n || k.ncols() != n || k.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {n}x{n}, B is {}x{}, K is {}x{}",
            b.nrows(),
            b.ncols(),
            k.nrows(),
            k.ncols()
        )));
    }
    ensure_finite(a, "A")?;
    ensure_finite(b, "B")?;
    ensure_finite(k, "K")?;
    Ok(a + b * k * f64::from(sigma))
}

/// Builds the closed loop and its state constraints, picks the branch from
/// the spectrum of `A_cl` and runs it on the requested backend.
pub fn mpi_compute(
    a: &Matrix,
    b: &Matrix,
    k: &Matrix,
    x: &ConstraintSet,
    uc: &ConstraintSet,
    backend: Backend,
    opts: &MpiOptions,
) -> Result<MpiResult> {
    opts.validate()?;
    let a_cl = closed_loop_matrix(a, b, k, opts.sigma)?;
    if x.dim() != a.nrows() || uc.dim() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "constraints in R^{} and R^{} for {} states and {} inputs",
            x.dim(),
            uc.dim(),
            a.nrows(),
            b.ncols()
        )));
    }
    let k_eff = k * f64::from(opts.sigma);
    let xbar_h = closed_loop_constraints_h(&x.h, &uc.h, &k_eff)?;
    let singular = match schur_split(&a_cl, opts.eps_zero, opts.tol_nil) {
        Ok(_) => true,
        Err(Error::NoZeroEigenvalues) => false,
        Err(e) => return Err(e),
    };
    match (backend, singular) {
        (Backend::Hpoly, false) => mpi_standard_h(&a_cl, &xbar_h, opts),
        (Backend::Hpoly, true) => mpi_singular_h(&a_cl, &xbar_h, opts),
        (Backend::Czono, s) => {
            let xbar_cz = closed_loop_constraints_cz(&x.cz, &uc.cz, &k_eff)?;
            if s {
                mpi_singular_cz(&a_cl, &xbar_cz, &xbar_h, opts)
            } else {
                mpi_standard_cz(&a_cl, &xbar_cz, &xbar_h, opts)
            }
        }
    }
}
