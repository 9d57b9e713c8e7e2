//! Chain of `l` masses linked by springs and dampers, forced at both ends,
//! discretized with forward Euler.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matops::Matrix;
use crate::mpi::{mpi_compute, mpi_oracle_forward, Backend, Branch, ConstraintSet, MpiOptions};
use crate::polyset::closed_loop_constraints_h;
use crate::synthesis::{dare_gain, DareSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KcVariant {
    /// Diagonal `1, -2, ..., -2, 1`, off-diagonal `-1`.
    #[default]
    Printed,
    /// Spring-chain Laplacian: diagonal `1, 2, ..., 2, 1`, off-diagonal `-1`.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CseParams {
    pub ell: usize,
    pub mu: f64,
    pub delta: f64,
    pub k: f64,
    pub ts: f64,
    pub kc: KcVariant,
}

impl CseParams {
    pub fn new(ell: usize) -> Self {
        Self {
            ell,
            mu: 4.0,
            delta: 1.0,
            k: 1.0,
            ts: 1.0,
            kc: KcVariant::Printed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    pub a: Matrix,
    pub b: Matrix,
}

pub fn stiffness(ell: usize, k: f64, variant: KcVariant) -> Matrix {
    let inner = match variant {
        KcVariant::Printed => -2.0,
        KcVariant::Standard => 2.0,
    };
    Matrix::from_fn(ell, ell, |i, j| {
        if i == j {
            if i == 0 || i == ell - 1 {
                k
            } else {
                inner * k
            }
        } else if i.abs_diff(j) == 1 {
            -k
        } else {
            0.0
        }
    })
}

pub fn cse_generate(p: &CseParams) -> Result<LtiSystem> {
    if p.ell < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 masses, got {}", p.ell)));
    }
    if !(p.mu > 0.0) || !(p.ts >= 0.0) || !p.delta.is_finite() || !p.k.is_finite() {
        return Err(Error::InvalidParams("mu must be positive and Ts non-negative".into()));
    }
    let l = p.ell;
    let n = 2 * l;
    let kc = stiffness(l, p.k, p.kc);
    let mut ac = Matrix::zeros(n, n);
    ac.view_mut((0, l), (l, l)).fill_with_identity();
    ac.view_mut((l, 0), (l, l)).copy_from(&(-&kc / p.mu));
    ac.view_mut((l, l), (l, l)).copy_from(&(Matrix::identity(l, l) * (-p.delta / p.mu)));
    let mut bc = Matrix::zeros(n, 2);
    bc[(l, 0)] = 1.0 / p.mu;
    bc[(n - 1, 1)] = -1.0 / p.mu;
    Ok(LtiSystem {
        a: Matrix::identity(n, n) + ac * p.ts,
        b: bc * p.ts,
    })
}

/// How the sweep closes the loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainMode {
    /// LQ gain with `Q = q I`, `R = r I`; `r = 0` is the cheap-control
    /// limit, which puts `m` closed-loop eigenvalues at zero.
    Riccati { q: f64, r: f64 },
}

impl GainMode {
    pub fn gain(&self, sys: &LtiSystem) -> Result<Matrix> {
        match *self {
            GainMode::Riccati { q, r } => {
                let spec = DareSpec::scaled_identity(sys.a.nrows(), sys.b.ncols(), q, r);
                Ok(dare_gain(&sys.a, &sys.b, &spec)?.0)
            }
        }
    }
}

/// One line of the sweep CSV. `branch` is `standard` or `singular` for the
/// dispatched computation and `oracle` for the forward baseline run on the
/// same closed loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub l: usize,
    pub branch: String,
    pub k_bar: usize,
    pub q_bar: usize,
    pub wall_ms: f64,
}

pub const SWEEP_HEADER: [&str; 5] = ["l", "branch", "k_bar", "q_bar", "wall_ms"];

fn sweep_instance(ell: usize, params: &CseParams, mode: GainMode, opts: &MpiOptions) -> Result<Vec<SweepRow>> {
    let sys = cse_generate(&CseParams { ell, ..*params })?;
    let k = mode.gain(&sys)?;
    let n = sys.a.nrows();
    let x = ConstraintSet::symmetric_box(&vec![1.0; n])?;
    let u = ConstraintSet::symmetric_box(&[1.0, 1.0])?;
    let opts = MpiOptions { sigma: 1, ..*opts };
    let main = mpi_compute(&sys.a, &sys.b, &k, &x, &u, Backend::Hpoly, &opts)?;

    let start = Instant::now();
    let a_cl = &sys.a + &sys.b * &k;
    let xbar = closed_loop_constraints_h(&x.h, &u.h, &k)?;
    let mut oracle = mpi_oracle_forward(&a_cl, &xbar, opts.k_max)?;
    // the baseline's clock includes building its constraint set
    oracle.wall_time = start.elapsed();

    let row = |branch: &str, r: &crate::mpi::MpiResult| SweepRow {
        l: ell,
        branch: branch.to_string(),
        k_bar: r.k_bar,
        q_bar: r.q_bar().unwrap_or(0),
        wall_ms: r.wall_time.as_secs_f64() * 1e3,
    };
    Ok(vec![row(main.branch.as_str(), &main), row("oracle", &oracle)])
}

/// Runs every `l` in `ells` (in parallel) and returns rows sorted by `l`,
/// dispatched branch first.
pub fn run_cse_sweep(ells: &[usize], params: &CseParams, mode: GainMode, opts: &MpiOptions) -> Result<Vec<SweepRow>> {
    let per: Vec<Vec<SweepRow>> = ells
        .par_iter()
        .map(|&l| sweep_instance(l, params, mode, opts))
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(SWEEP_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

/// Whether the dispatched row of each `l` is singular.
pub fn singular_levels(rows: &[SweepRow]) -> Vec<usize> {
    rows.iter()
        .filter(|r| r.branch == Branch::Singular.as_str())
        .map(|r| r.l)
        .collect()
}
