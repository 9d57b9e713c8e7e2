mod common;

use common::{gaussian, jordan_system};
use mpiset::matops::{
    eig_block_diag, hessenberg, mat_power, order_schur_zeros_last, orthogonality_error, real_schur, trailing_zero_dim,
};
use mpiset::mpi::schur_split;
use mpiset::Matrix;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn sorted_eigs(s: &Matrix) -> Vec<(f64, f64)> {
    let mut e: Vec<(f64, f64)> = eig_block_diag(s).unwrap().iter().map(|z| (z.re, z.im)).collect();
    e.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    e
}

#[test]
fn schur_factors_100_random_matrices() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.random_range(1..=12);
        let a = gaussian(&mut rng, n, n);
        let f = real_schur(&a, 0.0).unwrap();
        assert!(orthogonality_error(&f.u) <= 1e-10);
        assert!(f.reconstruction_error(&a) <= 1e-9 * a.norm());
        // quasi-triangular: nothing below the first subdiagonal, no two
        // consecutive subdiagonal entries
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(f.s[(i, j)], 0.0);
            }
        }
        for i in 1..n.saturating_sub(1) {
            assert!(f.s[(i, i - 1)] == 0.0 || f.s[(i + 1, i)] == 0.0);
        }
    }
}

#[test]
fn eigenvalues_agree_with_nalgebra() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rng.random_range(2..=8);
        let a = gaussian(&mut rng, n, n);
        let ours = sorted_eigs(&real_schur(&a, 0.0).unwrap().s);
        let mut theirs: Vec<(f64, f64)> = a.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        theirs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x.0 - y.0).abs() < 1e-8 && (x.1 - y.1).abs() < 1e-8, "{ours:?} vs {theirs:?}");
        }
    }
}

#[test]
fn hessenberg_is_a_similarity() {
    let mut rng = StdRng::seed_from_u64(13);
    let a = gaussian(&mut rng, 7, 7);
    let (q, h) = hessenberg(&a).unwrap();
    assert!((&q * &h * q.transpose() - &a).norm() < 1e-12 * a.norm());
    for i in 2..7 {
        for j in 0..i - 1 {
            assert_eq!(h[(i, j)], 0.0);
        }
    }
}

#[test]
fn nilpotent_block_on_every_split_instance() {
    let mut rng = StdRng::seed_from_u64(14);
    let mut instances: Vec<Matrix> = (0..40).map(|_| jordan_system(&mut rng, 6, 0.5).a).collect();
    instances.push(common::problem("singular6d.json").closed_loop().unwrap());
    for a in &instances {
        let split = schur_split(a, 1e-9, 1e-9).unwrap();
        let pw = mat_power(&split.s22, split.p + 1).unwrap();
        assert!(pw.norm() <= 1e-9 * a.norm(), "||S22^(p+1)|| = {:e}", pw.norm());
        assert!(orthogonality_error(&split.u) <= 1e-10);
        assert!((&split.u * split.s() * split.u.transpose() - a).norm() <= 1e-9 * a.norm());
    }
}

#[test]
fn jordan_structure_is_recovered() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..200 {
        let sys = jordan_system(&mut rng, 6, 0.5);
        let split = schur_split(&sys.a, 1e-9, 1e-9).unwrap();
        assert_eq!(split.d2, sys.cells.iter().sum::<usize>());
        assert_eq!(split.p + 1, *sys.cells.iter().max().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ordering_keeps_the_spectrum(seed in any::<u64>(), n in 2usize..9, zeros in 0usize..3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut a = gaussian(&mut rng, n, n);
        // rank-deficient: zero out columns, which forces zero eigenvalues
        for j in 0..zeros.min(n - 1) {
            a.column_mut(j).fill(0.0);
        }
        let f = real_schur(&a, 0.0).unwrap();
        let g = order_schur_zeros_last(&f, 1e-9).unwrap();
        let (x, y) = (sorted_eigs(&f.s), sorted_eigs(&g.s));
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8);
        }
        prop_assert!(orthogonality_error(&g.u) <= 1e-10);
        prop_assert!(g.reconstruction_error(&a) <= 1e-9 * a.norm());
        let d2 = trailing_zero_dim(&g.s, 1e-9);
        prop_assert!(d2 >= zeros.min(n - 1));
        if d2 > 0 {
            let s22 = g.s.view((n - d2, n - d2), (d2, d2)).into_owned();
            prop_assert!(mat_power(&s22, d2).unwrap().norm() <= 1e-8 * a.norm());
        }
    }
}
