//! JSON problem files and result reports (`"schema": 1`).
//!
//! Numbers are written as decimal strings so matrices survive a round trip
//! bit for bit; plain JSON numbers are accepted on input.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::czset::ConstrainedZonotope;
use crate::error::{Error, Result};
use crate::matops::{matrix_from_rows, Matrix, Vector};
use crate::mpi::{mpi_compute, Backend, ConstraintSet, MpiOptions, MpiResult, MpiSet, RowCount};
use crate::polyset::HPolyhedron;
use crate::synthesis::{dare_gain, DareSpec};

pub const SCHEMA: u32 = 1;

/// A real number stored as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Num(v)),
            Raw::Text(t) => t
                .trim()
                .parse::<f64>()
                .map(Num)
                .map_err(|_| serde::de::Error::custom(format!("not a decimal number: {t:?}"))),
        }
    }
}

pub type Rows = Vec<Vec<Num>>;

pub fn rows_of(m: &Matrix) -> Rows {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|&v| Num(v)).collect())
        .collect()
}

pub fn nums_of(v: &Vector) -> Vec<Num> {
    v.iter().map(|&x| Num(x)).collect()
}

/// Rows to a matrix; `cols` fixes the width of an empty matrix.
fn to_matrix(rows: &Rows, cols: usize) -> Result<Matrix> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, cols));
    }
    let raw: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|n| n.0).collect()).collect();
    matrix_from_rows(&raw)
}

fn to_vector(v: &[Num]) -> Vector {
    Vector::from_iterator(v.len(), v.iter().map(|n| n.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// `w I`
    ScaledIdentity(Num),
    Matrix(Rows),
}

impl Weight {
    fn resolve(&self, dim: usize) -> Result<Matrix> {
        match self {
            Weight::ScaledIdentity(w) => Ok(Matrix::identity(dim, dim) * w.0),
            Weight::Matrix(rows) => to_matrix(rows, dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainSpec {
    Literal(Rows),
    Dare {
        #[serde(rename = "Q")]
        q: Weight,
        #[serde(rename = "R")]
        r: Weight,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetSpec {
    /// `{|x_i| <= r_i}`
    Box(Vec<Num>),
    Hrep {
        #[serde(rename = "F")]
        f: Rows,
        theta: Vec<Num>,
    },
    /// Constrained zonotope `<c, G, A, b>`; its half-space form is required
    /// for the termination test and must describe the same set.
    Czono {
        c: Vec<Num>,
        #[serde(rename = "G")]
        g: Rows,
        #[serde(rename = "A", default)]
        a: Rows,
        #[serde(default)]
        b: Vec<Num>,
        #[serde(rename = "F")]
        f: Rows,
        theta: Vec<Num>,
    },
}

impl SetSpec {
    pub fn resolve(&self, dim: usize) -> Result<ConstraintSet> {
        let set = match self {
            SetSpec::Box(r) => {
                let radii: Vec<f64> = r.iter().map(|n| n.0).collect();
                ConstraintSet::symmetric_box(&radii)?
            }
            SetSpec::Hrep { f, theta } => {
                ConstraintSet::from_hpoly(HPolyhedron::new(to_matrix(f, dim)?, to_vector(theta))?)?
            }
            SetSpec::Czono { c, g, a, b, f, theta } => {
                let gm = to_matrix(g, 0)?;
                let am = to_matrix(a, gm.ncols())?;
                let cz = ConstrainedZonotope::new(to_vector(c), gm, am, to_vector(b))?;
                let h = HPolyhedron::new(to_matrix(f, dim)?, to_vector(theta))?;
                ConstraintSet::from_parts(h, cz)?
            }
        };
        if set.dim() != dim {
            return Err(Error::DimensionMismatch(format!("set in R^{}, expected R^{dim}", set.dim())));
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    Hpoly,
    Czono,
}

impl From<BackendName> for Backend {
    fn from(b: BackendName) -> Self {
        match b {
            BackendName::Hpoly => Backend::Hpoly,
            BackendName::Czono => Backend::Czono,
        }
    }
}

/// Optional overrides of [`MpiOptions`]; missing fields keep the defaults
/// (`eps_zero = tol_nil = 1e-9`, `tol_feas = 1e-8`, `k_max = 500`,
/// `p_offset = 0`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_zero: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_nil: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_feas: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_offset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "A")]
    pub a: Rows,
    #[serde(rename = "B")]
    pub b: Rows,
    pub gain: GainSpec,
    #[serde(default = "default_sign")]
    pub sign_convention: i32,
    #[serde(rename = "X")]
    pub x: SetSpec,
    #[serde(rename = "U")]
    pub u: SetSpec,
    #[serde(default = "default_backend")]
    pub backend: BackendName,
    #[serde(default)]
    pub opts: OptsSpec,
}

fn default_sign() -> i32 {
    1
}

fn default_backend() -> BackendName {
    BackendName::Hpoly
}

/// Everything [`mpi_compute`] needs, resolved and dimension-checked.
#[derive(Debug, Clone)]
pub struct Problem {
    pub a: Matrix,
    pub b: Matrix,
    pub k: Matrix,
    pub x: ConstraintSet,
    pub u: ConstraintSet,
    pub backend: Backend,
    pub opts: MpiOptions,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text)?;
        if file.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {}, expected {SCHEMA}", file.schema)));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn options(&self) -> Result<MpiOptions> {
        let d = MpiOptions::default();
        let o = &self.opts;
        let opts = MpiOptions {
            eps_zero: o.eps_zero.map_or(d.eps_zero, |v| v.0),
            tol_nil: o.tol_nil.map_or(d.tol_nil, |v| v.0),
            tol_feas: o.tol_feas.map_or(d.tol_feas, |v| v.0),
            k_max: o.k_max.unwrap_or(d.k_max),
            p_offset: o.p_offset.unwrap_or(d.p_offset),
            sigma: self.sign_convention,
        };
        opts.validate()?;
        Ok(opts)
    }

    /// Builds the matrices and sets, synthesizing the gain when asked to.
    pub fn resolve(&self) -> Result<Problem> {
        let a = to_matrix(&self.a, 0)?;
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::NonSquare { rows: n, cols: a.ncols() });
        }
        let b = to_matrix(&self.b, 0)?;
        if b.nrows() != n {
            return Err(Error::DimensionMismatch(format!("B has {} rows, A has {n}", b.nrows())));
        }
        let m = b.ncols();
        let opts = self.options()?;
        let k = match &self.gain {
            GainSpec::Literal(rows) => to_matrix(rows, n)?,
            GainSpec::Dare { q, r } => {
                let spec = DareSpec {
                    q: q.resolve(n)?,
                    r: r.resolve(m)?,
                    ..DareSpec::scaled_identity(n, m, 1.0, 1.0)
                };
                // the synthesized gain is meant for u = K x
                dare_gain(&a, &b, &spec)?.0 * f64::from(opts.sigma)
            }
        };
        if k.nrows() != m || k.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "K is {}x{}, expected {m}x{n}",
                k.nrows(),
                k.ncols()
            )));
        }
        Ok(Problem {
            a,
            b,
            k,
            x: self.x.resolve(n)?,
            u: self.u.resolve(m)?,
            backend: self.backend.into(),
            opts,
        })
    }
}

impl Problem {
    pub fn closed_loop(&self) -> Result<Matrix> {
        crate::mpi::closed_loop_matrix(&self.a, &self.b, &self.k, self.opts.sigma)
    }

    /// State constraints of the closed loop, `X cap {x : sigma K x in U}`.
    pub fn xbar_h(&self) -> Result<HPolyhedron> {
        crate::polyset::closed_loop_constraints_h(&self.x.h, &self.u.h, &(&self.k * f64::from(self.opts.sigma)))
    }

    pub fn solve(&self) -> Result<MpiResult> {
        mpi_compute(&self.a, &self.b, &self.k, &self.x, &self.u, self.backend, &self.opts)
    }
}

pub fn run_problem(path: &Path) -> Result<(MpiResult, ResultReport)> {
    let result = ProblemFile::load(path)?.resolve()?.solve()?;
    let report = ResultReport::from_result(&result);
    Ok((result, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetReport {
    Hpoly {
        #[serde(rename = "F")]
        f: Rows,
        theta: Vec<Num>,
    },
    Czono {
        c: Vec<Num>,
        #[serde(rename = "G")]
        g: Rows,
        #[serde(rename = "A")]
        a: Rows,
        b: Vec<Num>,
    },
}

impl SetReport {
    pub fn from_set(set: &MpiSet) -> Self {
        match set {
            MpiSet::H(p) => SetReport::Hpoly {
                f: rows_of(p.f()),
                theta: nums_of(p.theta()),
            },
            MpiSet::Cz(z) => SetReport::Czono {
                c: nums_of(z.center()),
                g: rows_of(z.generators()),
                a: rows_of(z.eq_matrix()),
                b: nums_of(z.eq_rhs()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedReport {
    pub d1: usize,
    pub d2: usize,
    pub p: usize,
    pub horizon: usize,
    pub k_bar_z: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_z: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultReport {
    pub schema: u32,
    pub branch: String,
    pub k_bar: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_bar: Option<usize>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub generators: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_c: Option<usize>,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedReport>,
    pub set: SetReport,
}

impl ResultReport {
    pub fn from_result(r: &MpiResult) -> Self {
        let (q_bar, generators, n_c) = match r.row_count() {
            RowCount::Inequalities(q) => (Some(q), None, None),
            RowCount::Generators { generators, constraints } => (None, Some(generators), Some(constraints)),
        };
        ResultReport {
            schema: SCHEMA,
            branch: r.branch.as_str().to_string(),
            k_bar: r.k_bar,
            q_bar,
            generators,
            n_c,
            wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
            reduced: r.reduced.as_ref().map(|run| ReducedReport {
                d1: run.d1,
                d2: run.d2,
                p: run.p,
                horizon: run.horizon,
                k_bar_z: run.k_bar_z,
                q_z: run.phi_z.as_ref().and_then(|s| s.as_h()).map(HPolyhedron::num_rows),
            }),
            set: SetReport::from_set(&r.set),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
