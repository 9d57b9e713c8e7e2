mod common;

use common::{jordan_system, random_radii, rank, sample_set, support_gap, unit_direction};
use mpiset::lp::support_hpoly;
use mpiset::matops::mat_power;
use mpiset::mpi::{
    lifted_reduced_set, mpi_oracle_forward, mpi_singular_cz, mpi_singular_h, mpi_standard_cz, mpi_standard_h,
    schur_split, MpiResult,
};
use mpiset::polyset::{contains_h, equals_h, intersect_h};
use mpiset::synthesis::spectral_radius;
use mpiset::{Backend, ConstrainedZonotope, Error, HPolyhedron, Matrix, MpiOptions, MpiSet, Vector};
use rand::rngs::StdRng;
use rand::SeedableRng;

struct Instance {
    a: Matrix,
    xbar: HPolyhedron,
    xbar_cz: ConstrainedZonotope,
}

fn singular_instances(seed: u64, count: usize, max_n: usize) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sys = jordan_system(&mut rng, max_n, 0.5);
            let radii = random_radii(&mut rng, sys.a.nrows());
            Instance {
                a: sys.a,
                xbar: HPolyhedron::symmetric_box(&radii).unwrap(),
                xbar_cz: ConstrainedZonotope::symmetric_box(&radii).unwrap(),
            }
        })
        .collect()
}

fn invertible_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % 3;
            let g = common::gaussian(&mut rng, n, n);
            let a = &g * (0.9 / spectral_radius(&g).unwrap());
            let radii = random_radii(&mut rng, n);
            Instance {
                a,
                xbar: HPolyhedron::symmetric_box(&radii).unwrap(),
                xbar_cz: ConstrainedZonotope::symmetric_box(&radii).unwrap(),
            }
        })
        .collect()
}

fn h(r: &MpiResult) -> &HPolyhedron {
    r.set.as_h().unwrap()
}

#[test]
fn six_d_example_equals_forward_reference() {
    let p = common::problem("singular6d.json");
    let r = p.solve().unwrap();
    let o = mpi_oracle_forward(&p.closed_loop().unwrap(), &p.xbar_h().unwrap(), 500).unwrap();
    assert!(equals_h(h(&r), h(&o), 1e-6).unwrap());
}

#[test]
fn random_singular_systems_equal_forward_reference() {
    let opts = MpiOptions::default();
    for (i, inst) in singular_instances(31, 24, 6).iter().enumerate() {
        let s = mpi_singular_h(&inst.a, &inst.xbar, &opts).unwrap();
        let o = mpi_oracle_forward(&inst.a, &inst.xbar, opts.k_max).unwrap();
        assert!(equals_h(h(&s), h(&o), 1e-6).unwrap(), "instance {i}");
    }
}

#[test]
fn longer_horizons_give_the_same_set() {
    for inst in singular_instances(32, 6, 5) {
        let base = mpi_singular_h(&inst.a, &inst.xbar, &MpiOptions::default()).unwrap();
        let opts = MpiOptions { p_offset: 2, ..Default::default() };
        let longer = mpi_singular_h(&inst.a, &inst.xbar, &opts).unwrap();
        assert!(equals_h(h(&base), h(&longer), 1e-6).unwrap());
    }
}

#[test]
fn invertible_systems_equal_forward_reference() {
    let opts = MpiOptions::default();
    for inst in invertible_instances(33, 6) {
        let s = mpi_standard_h(&inst.a, &inst.xbar, &opts).unwrap();
        let o = mpi_oracle_forward(&inst.a, &inst.xbar, opts.k_max).unwrap();
        assert!(equals_h(h(&s), h(&o), 1e-6).unwrap());
        assert_eq!(s.k_bar, o.k_bar);
    }
}

#[test]
fn backends_agree_in_support() {
    let mut rng = StdRng::seed_from_u64(34);
    for name in ["plant2d_riccati.json", "plant2d_placement.json", "singular6d.json"] {
        let mut p = common::problem(name);
        let hr = p.solve().unwrap();
        p.backend = Backend::Czono;
        let cr = p.solve().unwrap();
        assert_eq!(hr.k_bar, cr.k_bar);
        assert!(support_gap(&mut rng, &hr.set, &cr.set, 100) < 1e-6, "{name}");
    }
    let opts = MpiOptions::default();
    for inst in singular_instances(35, 5, 5) {
        let hr = mpi_singular_h(&inst.a, &inst.xbar, &opts).unwrap();
        let cr = mpi_singular_cz(&inst.a, &inst.xbar_cz, &inst.xbar, &opts).unwrap();
        assert!(support_gap(&mut rng, &hr.set, &cr.set, 100) < 1e-6);
    }
    for inst in invertible_instances(36, 5) {
        let hr = mpi_standard_h(&inst.a, &inst.xbar, &opts).unwrap();
        let cr = mpi_standard_cz(&inst.a, &inst.xbar_cz, &inst.xbar, &opts).unwrap();
        assert!(support_gap(&mut rng, &hr.set, &cr.set, 100) < 1e-6);
    }
}

fn check_invariance(rng: &mut StdRng, a: &Matrix, xbar: &HPolyhedron, set: &MpiSet) {
    for x in sample_set(rng, set, 1000) {
        assert!(set.contains(&x, 1e-9).unwrap(), "sample outside");
        assert!(xbar.contains_point(&x, 1e-7));
        assert!(set.contains(&(a * &x), 1e-7).unwrap(), "A x left the set from {x:?}");
    }
}

#[test]
fn sampled_points_stay_inside() {
    let mut rng = StdRng::seed_from_u64(37);
    for name in ["plant2d_riccati.json", "plant2d_placement.json", "singular6d.json", "singular6d_czono.json"] {
        let p = common::problem(name);
        let r = p.solve().unwrap();
        check_invariance(&mut rng, &p.closed_loop().unwrap(), &p.xbar_h().unwrap(), &r.set);
    }
    let opts = MpiOptions::default();
    for inst in singular_instances(38, 4, 5) {
        let hr = mpi_singular_h(&inst.a, &inst.xbar, &opts).unwrap();
        check_invariance(&mut rng, &inst.a, &inst.xbar, &hr.set);
        let cr = mpi_singular_cz(&inst.a, &inst.xbar_cz, &inst.xbar, &opts).unwrap();
        check_invariance(&mut rng, &inst.a, &inst.xbar, &cr.set);
    }
}

#[test]
fn invariant_sets_are_admissible() {
    let opts = MpiOptions::default();
    for inst in singular_instances(39, 8, 6) {
        let r = mpi_singular_h(&inst.a, &inst.xbar, &opts).unwrap();
        assert!(contains_h(&inst.xbar, h(&r), 1e-8).unwrap());
    }
}

#[test]
fn lifted_reduced_set_alone_is_unbounded() {
    let mut cases: Vec<(Matrix, HPolyhedron)> = singular_instances(40, 10, 6)
        .into_iter()
        .map(|i| (i.a, i.xbar))
        .collect();
    let p = common::problem("singular6d.json");
    cases.push((p.closed_loop().unwrap(), p.xbar_h().unwrap()));
    let opts = MpiOptions::default();
    let mut lifted = 0;
    for (a, xbar) in cases {
        let r = mpi_singular_h(&a, &xbar, &opts).unwrap();
        let run = r.reduced.as_ref().unwrap();
        let Some(phi_z) = run.phi_z.as_ref() else { continue };
        lifted += 1;
        let split = schur_split(&a, opts.eps_zero, opts.tol_nil).unwrap();
        let tail = lifted_reduced_set(&split, phi_z.as_h().unwrap(), run.horizon).unwrap();
        for j in 0..split.d2 {
            let u: Vector = split.u2().column(j).into_owned();
            for dir in [&u, &(-&u)] {
                assert_eq!(support_hpoly(&tail, dir).unwrap(), f64::INFINITY);
                let both = intersect_h(&tail, &xbar).unwrap();
                assert!(support_hpoly(&both, dir).unwrap().is_finite());
                assert!(r.set.support(dir).unwrap().is_finite());
            }
        }
    }
    assert!(lifted >= 5);
}

#[test]
fn forward_rows_lose_rank_as_cells_die() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..30 {
        let sys = jordan_system(&mut rng, 6, 0.5);
        let n = sys.a.nrows();
        let f = HPolyhedron::symmetric_box(&vec![1.0; n]).unwrap();
        let largest = *sys.cells.iter().max().unwrap();
        for k in 1..=largest + 1 {
            let rows = f.f() * mat_power(&sys.a, k).unwrap();
            let dead: usize = sys.cells.iter().filter(|&&c| c < k).sum();
            let exact = n - sys.cells.iter().map(|&c| c.min(k)).sum::<usize>();
            let r = rank(&rows, 1e-9);
            assert!(r <= n - dead, "k = {k}, cells {:?}: rank {r}", sys.cells);
            assert_eq!(r, exact);
        }
    }
}

#[test]
fn cap_is_an_error_not_a_truncation() {
    let p = common::problem("plant2d_placement.json");
    let opts = MpiOptions { k_max: 3, ..p.opts };
    let a = p.closed_loop().unwrap();
    assert!(matches!(
        mpi_standard_h(&a, &p.xbar_h().unwrap(), &opts),
        Err(Error::IterationCapExceeded(_))
    ));
    assert!(matches!(mpi_oracle_forward(&a, &p.xbar_h().unwrap(), 3), Err(Error::IterationCapExceeded(_))));
}

#[test]
fn random_directions_do_not_escape_the_box() {
    let mut rng = StdRng::seed_from_u64(42);
    let p = common::problem("singular6d.json");
    let r = p.solve().unwrap();
    for _ in 0..100 {
        let d = unit_direction(&mut rng, 6);
        assert!(r.set.support(&d).unwrap() <= d.iter().map(|v| v.abs()).sum::<f64>() + 1e-9);
    }
}
