//! Linear programming: a dense bounded-variable primal simplex and the
//! support, membership and emptiness queries both set backends are built on.

mod sets;
mod simplex;

pub use sets::{cz_is_empty, hpoly_is_empty, member_cz, support_cz, support_hpoly};

use crate::error::{Error, Result};
use crate::matops::{Matrix, Vector};
use simplex::{solve_standard, Solved, Standard};

/// Default absolute feasibility tolerance.
pub const TOL_FEAS: f64 = 1e-8;

/// `maximize c^T x` subject to `A_eq x = b_eq`, `A_in x <= b_in`,
/// `lower <= x <= upper` (infinite bounds allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vector,
    pub a_eq: Matrix,
    pub b_eq: Vector,
    pub a_in: Matrix,
    pub b_in: Vector,
    pub lower: Vector,
    pub upper: Vector,
}

impl LinearProgram {
    /// Unconstrained program over free variables; add rows and bounds with
    /// the builder methods.
    pub fn new(objective: Vector) -> Self {
        let n = objective.len();
        Self {
            objective,
            a_eq: Matrix::zeros(0, n),
            b_eq: Vector::zeros(0),
            a_in: Matrix::zeros(0, n),
            b_in: Vector::zeros(0),
            lower: Vector::from_element(n, f64::NEG_INFINITY),
            upper: Vector::from_element(n, f64::INFINITY),
        }
    }

    pub fn with_eq(mut self, a: Matrix, b: Vector) -> Self {
        self.a_eq = a;
        self.b_eq = b;
        self
    }

    pub fn with_ineq(mut self, a: Matrix, b: Vector) -> Self {
        self.a_in = a;
        self.b_in = b;
        self
    }

    pub fn with_bounds(mut self, lower: Vector, upper: Vector) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let ok = self.a_eq.ncols() == n
            && self.a_eq.nrows() == self.b_eq.len()
            && self.a_in.ncols() == n
            && self.a_in.nrows() == self.b_in.len()
            && self.lower.len() == n
            && self.upper.len() == n;
        if !ok {
            return Err(Error::DimensionMismatch("linear program".into()));
        }
        let finite = |m: &Matrix| m.iter().all(|v| v.is_finite());
        if !(finite(&self.a_eq)
            && finite(&self.a_in)
            && self.b_eq.iter().all(|v| v.is_finite())
            && self.b_in.iter().all(|v| v.is_finite())
            && self.objective.iter().all(|v| v.is_finite()))
        {
            return Err(Error::NonFinite("linear program data"));
        }
        if self
            .lower
            .iter()
            .zip(self.upper.iter())
            .any(|(l, u)| l > u || l.is_nan() || u.is_nan() || *l == f64::INFINITY || *u == f64::NEG_INFINITY)
        {
            return Err(Error::InvalidParams("lp bounds must satisfy lower <= upper".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal { x: Vector, value: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self.status {
            LpStatus::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Solves the program; inequality rows receive slack columns, every row an
/// artificial for phase 1.
pub fn lp_solve(lp: &LinearProgram, tol_feas: f64) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();
    let (me, mi) = (lp.a_eq.nrows(), lp.a_in.nrows());
    let (m, cols) = (me + mi, n + mi);
    let mut a = vec![0.0; m * cols];
    for i in 0..me {
        for j in 0..n {
            a[i * cols + j] = lp.a_eq[(i, j)];
        }
    }
    for i in 0..mi {
        let row = me + i;
        for j in 0..n {
            a[row * cols + j] = lp.a_in[(i, j)];
        }
        a[row * cols + n + i] = 1.0;
    }
    let mut r: Vec<f64> = lp.b_eq.iter().copied().collect();
    r.extend(lp.b_in.iter());
    let mut c: Vec<f64> = lp.objective.iter().copied().collect();
    c.extend(std::iter::repeat_n(0.0, mi));
    let mut lo: Vec<f64> = lp.lower.iter().copied().collect();
    lo.extend(std::iter::repeat_n(0.0, mi));
    let mut hi: Vec<f64> = lp.upper.iter().copied().collect();
    hi.extend(std::iter::repeat_n(f64::INFINITY, mi));

    let std = Standard {
        a,
        m,
        n: cols,
        r,
        c,
        lo,
        hi,
    };
    let (solved, iterations) = solve_standard(&std, tol_feas)?;
    let status = match solved {
        Solved::Optimal { z, value } => LpStatus::Optimal {
            x: Vector::from_column_slice(&z[..n]),
            value,
        },
        Solved::Infeasible => LpStatus::Infeasible,
        Solved::Unbounded => LpStatus::Unbounded,
    };
    Ok(LpOutcome { status, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(n: usize) -> (Vector, Vector) {
        (Vector::from_element(n, -1.0), Vector::from_element(n, 1.0))
    }

    #[test]
    fn box_support() {
        let (l, u) = boxed(2);
        let lp = LinearProgram::new(Vector::from_vec(vec![1.0, 1.0])).with_bounds(l, u);
        let out = lp_solve(&lp, TOL_FEAS).unwrap();
        match out.status {
            LpStatus::Optimal { x, value } => {
                assert!((value - 2.0).abs() < 1e-12);
                assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn equality_outside_box_is_infeasible() {
        let (l, u) = boxed(2);
        let lp = LinearProgram::new(Vector::zeros(2))
            .with_eq(Matrix::from_row_slice(1, 2, &[1.0, 0.0]), Vector::from_vec(vec![2.0]))
            .with_bounds(l, u);
        assert_eq!(lp_solve(&lp, TOL_FEAS).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn halfspace_is_unbounded_sideways() {
        let lp = LinearProgram::new(Vector::from_vec(vec![0.0, 1.0]))
            .with_ineq(Matrix::from_row_slice(1, 2, &[1.0, 0.0]), Vector::from_vec(vec![0.0]));
        assert_eq!(lp_solve(&lp, TOL_FEAS).unwrap().status, LpStatus::Unbounded);
        let lp = LinearProgram::new(Vector::from_vec(vec![1.0, 0.0]))
            .with_ineq(Matrix::from_row_slice(1, 2, &[1.0, 0.0]), Vector::from_vec(vec![0.0]));
        assert!(lp_solve(&lp, TOL_FEAS).unwrap().value().unwrap().abs() < 1e-12);
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0 -> 36 at (2, 6)
        let lp = LinearProgram::new(Vector::from_vec(vec![3.0, 5.0]))
            .with_ineq(
                Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 3.0, 2.0]),
                Vector::from_vec(vec![4.0, 12.0, 18.0]),
            )
            .with_bounds(Vector::zeros(2), Vector::from_element(2, f64::INFINITY));
        match lp_solve(&lp, TOL_FEAS).unwrap().status {
            LpStatus::Optimal { x, value } => {
                assert!((value - 36.0).abs() < 1e-10);
                assert!((x[0] - 2.0).abs() < 1e-10 && (x[1] - 6.0).abs() < 1e-10);
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_free_variables() {
        // min x + y s.t. x + y >= 3, x - y = 1, free -> 3 at (2, 1)
        let lp = LinearProgram::new(Vector::from_vec(vec![-1.0, -1.0]))
            .with_ineq(Matrix::from_row_slice(1, 2, &[-1.0, -1.0]), Vector::from_vec(vec![-3.0]))
            .with_eq(Matrix::from_row_slice(1, 2, &[1.0, -1.0]), Vector::from_vec(vec![1.0]));
        match lp_solve(&lp, TOL_FEAS).unwrap().status {
            LpStatus::Optimal { x, value } => {
                assert!((value + 3.0).abs() < 1e-10);
                assert!((x[0] - 2.0).abs() < 1e-10 && (x[1] - 1.0).abs() < 1e-10);
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn degenerate_cube_corner() {
        // many constraints active at the optimum
        let n = 4;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            rows.extend(r.iter());
            rhs.push(1.0);
            for j in 0..n {
                if j != i {
                    let mut r = vec![0.0; n];
                    r[i] = 1.0;
                    r[j] = 1.0;
                    rows.extend(r.iter());
                    rhs.push(2.0);
                }
            }
        }
        let q = rhs.len();
        let lp = LinearProgram::new(Vector::from_element(n, 1.0))
            .with_ineq(Matrix::from_row_slice(q, n, &rows), Vector::from_vec(rhs));
        assert!((lp_solve(&lp, TOL_FEAS).unwrap().value().unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_malformed() {
        let lp = LinearProgram::new(Vector::zeros(2)).with_bounds(
            Vector::from_vec(vec![1.0, 0.0]),
            Vector::from_vec(vec![0.0, 0.0]),
        );
        assert!(matches!(lp_solve(&lp, TOL_FEAS), Err(Error::InvalidParams(_))));
        let lp = LinearProgram::new(Vector::zeros(2)).with_eq(Matrix::zeros(1, 3), Vector::zeros(1));
        assert!(matches!(lp_solve(&lp, TOL_FEAS), Err(Error::DimensionMismatch(_))));
    }
}
