#![allow(dead_code)]

use std::path::PathBuf;

use mpiset::bench::problem::Problem;
use mpiset::bench::ProblemFile;
use mpiset::lp::{lp_solve, LinearProgram, LpStatus};
use mpiset::{ConstrainedZonotope, HPolyhedron, Matrix, MpiSet, Vector};
use rand::rngs::StdRng;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

pub fn problem(name: &str) -> Problem {
    ProblemFile::load(&data(name)).unwrap().resolve().unwrap()
}

pub fn gaussian(rng: &mut StdRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

pub fn unit_direction(rng: &mut StdRng, n: usize) -> Vector {
    loop {
        let d = Vector::from_fn(n, |_, _| StandardNormal.sample(rng));
        if d.norm() > 1e-3 {
            return d.normalize();
        }
    }
}

pub fn random_orthogonal(rng: &mut StdRng, n: usize) -> Matrix {
    gaussian(rng, n, n).qr().q()
}

/// A closed loop with known structure, hidden by an orthogonal change of
/// basis.
pub struct JordanSystem {
    pub a: Matrix,
    /// sizes of the Jordan cells at zero
    pub cells: Vec<usize>,
    /// nonzero eigenvalue magnitudes lie in `[0.05, 0.95]`
    pub d1: usize,
}

/// `n <= max_n`, one to three zero eigenvalues split into random Jordan
/// cells, the rest real or complex with modulus in `[0.05, 0.95]`, random
/// upper-triangular coupling scaled by `coupling`.
pub fn jordan_system(rng: &mut StdRng, max_n: usize, coupling: f64) -> JordanSystem {
    let nz: usize = rng.random_range(1..=3);
    let n: usize = rng.random_range((nz + 1).max(2)..=max_n.max(nz + 1));
    let mut cells = vec![];
    let mut rest = nz;
    while rest > 0 {
        let c = rng.random_range(1..=rest);
        cells.push(c);
        rest -= c;
    }
    let d1 = n - nz;
    let mut t = Matrix::zeros(n, n);
    let mut i = 0;
    while i < d1 {
        if i + 1 < d1 && rng.random_bool(0.4) {
            let r: f64 = rng.random_range(0.05..0.95);
            let th: f64 = rng.random_range(0.2..3.0);
            t[(i, i)] = r * th.cos();
            t[(i + 1, i + 1)] = r * th.cos();
            t[(i, i + 1)] = r * th.sin();
            t[(i + 1, i)] = -r * th.sin();
            i += 2;
        } else {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            t[(i, i)] = sign * rng.random_range(0.05..0.95);
            i += 1;
        }
    }
    let mut pos = d1;
    for &c in &cells {
        for j in 0..c - 1 {
            t[(pos + j, pos + j + 1)] = 1.0;
        }
        pos += c;
    }
    for r in 0..n {
        for c in r + 1..n {
            let in_pair = r < d1 && c < d1 && t[(c, r)] != 0.0;
            let in_cell = r >= d1 && t[(r, c)] != 0.0;
            if !in_pair && !in_cell && (c < d1 || r < d1) {
                let v: f64 = StandardNormal.sample(rng);
                t[(r, c)] += coupling * v;
            }
        }
    }
    let q = random_orthogonal(rng, n);
    JordanSystem { a: &q * t * q.transpose(), cells, d1 }
}

/// Box `[-r_i, r_i]` with radii in `[0.5, 2]`.
pub fn random_radii(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.5..2.0)).collect()
}

/// Hit-and-run walk inside a bounded polytope, started at the origin.
pub fn sample_hpoly(rng: &mut StdRng, p: &HPolyhedron, count: usize) -> Vec<Vector> {
    let n = p.dim();
    let mut x = Vector::zeros(n);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = unit_direction(rng, n);
        let fd = p.f() * &d;
        let slack = p.theta() - p.f() * &x;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..fd.len() {
            if fd[i] > 1e-14 {
                hi = hi.min(slack[i] / fd[i]);
            } else if fd[i] < -1e-14 {
                lo = lo.max(slack[i] / fd[i]);
            }
        }
        if lo < hi {
            x += d * rng.random_range(lo..=hi);
        }
        out.push(x.clone());
    }
    out
}

/// Maximizer of `d^T x` over a constrained zonotope.
pub fn cz_support_point(z: &ConstrainedZonotope, d: &Vector) -> Vector {
    let g = z.generators();
    let ng = g.ncols();
    let lp = LinearProgram::new(g.transpose() * d)
        .with_eq(z.eq_matrix().clone(), z.eq_rhs().clone())
        .with_bounds(Vector::from_element(ng, -1.0), Vector::from_element(ng, 1.0));
    match lp_solve(&lp, 1e-9).unwrap().status {
        LpStatus::Optimal { x, .. } => z.center() + g * x,
        s => panic!("support LP: {s:?}"),
    }
}

/// Random convex combinations of support points.
pub fn sample_cz(rng: &mut StdRng, z: &ConstrainedZonotope, count: usize) -> Vec<Vector> {
    let n = z.dim();
    let anchors: Vec<Vector> = (0..4 * n + 4).map(|_| cz_support_point(z, &unit_direction(rng, n))).collect();
    (0..count)
        .map(|_| {
            let w: Vec<f64> = anchors.iter().map(|_| rng.random_range(0.0..1.0f64).powi(3)).collect();
            let total: f64 = w.iter().sum();
            anchors.iter().zip(&w).fold(Vector::zeros(n), |acc, (a, wi)| acc + a * (wi / total))
        })
        .collect()
}

pub fn sample_set(rng: &mut StdRng, set: &MpiSet, count: usize) -> Vec<Vector> {
    match set {
        MpiSet::H(p) => sample_hpoly(rng, p, count),
        MpiSet::Cz(z) => sample_cz(rng, z, count),
    }
}

/// Largest support difference over `count` random unit directions.
pub fn support_gap(rng: &mut StdRng, s1: &MpiSet, s2: &MpiSet, count: usize) -> f64 {
    (0..count)
        .map(|_| {
            let d = unit_direction(rng, s1.dim());
            (s1.support(&d).unwrap() - s2.support(&d).unwrap()).abs()
        })
        .fold(0.0, f64::max)
}

/// Numerical rank from singular values.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.max();
    sv.iter().filter(|&&s| s > tol * top.max(1.0)).count()
}
