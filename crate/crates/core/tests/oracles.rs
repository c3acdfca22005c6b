mod common;

use common::{
    interpolated_char_poly, jacobi_oracle, minor_rank, random_matrix, random_vectors, rng, sig,
};
use jordan_osserman::curvature::{einstein_constant, r_id, r_phi, r_phi_a, standard_phi};
use jordan_osserman::grassmann::{coordinate_subspace, sample_subspace, AdmissiblePair, Subspace};
use jordan_osserman::jacobi::{jacobi_subspace, jacobi_vector};
use jordan_osserman::linalg::{jordan_fingerprint, rat, Matrix, Partition, Polynomial};
use jordan_osserman::osserman::{spectral_fingerprint, test_type, Mode, ScanConfig, VerdictKind};
use rand::Rng;

#[test]
fn char_poly_and_rank_match_minor_oracles() {
    let mut g = rng(11);
    for _ in 0..150 {
        let n = g.gen_range(1..=4);
        let m = random_matrix(&mut g, n, n, 4);
        assert_eq!(m.char_poly().unwrap(), interpolated_char_poly(&m), "{m}");
        assert_eq!(m.rank(), minor_rank(&m), "{m}");
        let (rows, cols) = (g.gen_range(1..=4), g.gen_range(1..=4));
        let rect = random_matrix(&mut g, rows, cols, 3);
        assert_eq!(rect.rank(), minor_rank(&rect), "{rect}");
    }
}

#[test]
fn jacobi_subspace_matches_definition() {
    let mut g = rng(12);
    let s = sig(2, 2);
    let tensors = [
        r_id(s),
        r_phi_a(s, 1).unwrap(),
        r_phi(&standard_phi(s, 1).unwrap()),
        r_phi(&standard_phi(s, -1).unwrap()),
    ];
    let mut checked = 0;
    while checked < 40 {
        let k = g.gen_range(1..=3);
        let basis = random_vectors(&mut g, k, 4, 3);
        let Ok(sigma) = Subspace::new(s, basis.clone()) else {
            continue;
        };
        if !sigma.is_nondegenerate() {
            continue;
        }
        for r in &tensors {
            assert_eq!(
                *jacobi_subspace(r, &sigma).unwrap().matrix(),
                jacobi_oracle(r, &basis)
            );
        }
        checked += 1;
    }
}

#[test]
fn square_zero_blocks_give_two_one_partitions() {
    // explicit block matrices with r blocks [[0,1],[0,0]] and n - 2r zeros
    for n in 2..=6 {
        for r in 0..=n / 2 {
            let m = Matrix::from_fn(n, n, |i, j| {
                if j == i + 1 && i % 2 == 0 && i < 2 * r {
                    rat(1, 1)
                } else {
                    rat(0, 1)
                }
            });
            assert!((&m * &m).is_zero());
            let fp = jordan_fingerprint(&m).unwrap();
            assert_eq!(
                fp.rational_part[&rat(0, 1)],
                Partition::from_counts(&[(2, r), (1, n - 2 * r)])
            );
        }
    }
}

#[test]
fn round_sphere_line_operator() {
    // R_Id on (0,3), sigma = span{e1}: J = diag(0,1,1)
    let s = sig(0, 3);
    let r = r_id(s);
    let line = coordinate_subspace(s, &[], &[1]).unwrap();
    let j = jacobi_subspace(&r, &line).unwrap();
    assert_eq!(
        *j.matrix(),
        Matrix::diagonal(&[rat(0, 1), rat(1, 1), rat(1, 1)])
    );
    // lambda (lambda - 1)^2
    assert_eq!(
        spectral_fingerprint(&r, &line).unwrap(),
        Polynomial::from_i64(&[0, 1, -2, 1])
    );
    let fp = jordan_fingerprint(j.matrix()).unwrap();
    assert_eq!(fp.rational_part[&rat(0, 1)], Partition::new(vec![1]));
    assert_eq!(fp.rational_part[&rat(1, 1)], Partition::new(vec![1, 1]));
    assert!(fp.irreducible_part.is_empty());
}

#[test]
fn whole_space_gives_einstein_multiple() {
    for s in [sig(0, 3), sig(1, 2), sig(2, 2), sig(1, 4)] {
        let whole = Subspace::new(s, (0..s.dim()).map(|i| s.unit(i)).collect()).unwrap();
        let mut tensors = vec![r_id(s)];
        if s.p() == 0 && s.q() % 2 == 0 {
            tensors.push(r_phi(&standard_phi(s, -1).unwrap()));
        }
        if s.p().min(s.q()) >= 2 {
            tensors.push(r_phi_a(s, 1).unwrap());
        }
        for r in &tensors {
            let c = einstein_constant(r).unwrap();
            let n = s.dim();
            assert_eq!(
                *jacobi_subspace(r, &whole).unwrap().matrix(),
                Matrix::scalar(n, &c)
            );
            let expected = Polynomial::from_coeffs(vec![-c.clone(), rat(1, 1)]).pow(n as u32);
            assert_eq!(spectral_fingerprint(r, &whole).unwrap(), expected);
        }
    }
}

#[test]
fn phi_a_jacobi_is_three_times_rank_one_form() {
    // J_a(x) y = 3 (Phi_a x, y) Phi_a x
    let mut g = rng(13);
    for (p, q, a) in [(2, 2, 1), (4, 4, 2), (3, 5, 1)] {
        let s = sig(p, q);
        let r = r_phi_a(s, a).unwrap();
        let phi = jordan_osserman::curvature::phi_a(s, a).unwrap();
        for x in random_vectors(&mut g, 5, s.dim(), 3) {
            let phix = phi.matrix().mul_vec(&x);
            let expected = Matrix::from_fn(s.dim(), s.dim(), |m, l| {
                rat(3, 1) * s.inner(&phix, &s.unit(l)) * &phix[m]
            });
            assert_eq!(*jacobi_vector(&r, &x).unwrap().matrix(), expected);
        }
    }
}

#[test]
fn maximal_timelike_fingerprint() {
    for (p, q, a) in [(4, 4, 1), (4, 4, 2), (4, 6, 2), (6, 6, 3), (2, 3, 1)] {
        let s = sig(p, q);
        let r = r_phi_a(s, a).unwrap();
        let timelike: Vec<usize> = (1..=p).collect();
        let sigma = coordinate_subspace(s, &timelike, &[]).unwrap();
        let j = jacobi_subspace(&r, &sigma).unwrap().into_matrix();
        assert_eq!(j.rank(), 2 * a);
        let fp = jordan_fingerprint(&j).unwrap();
        let n = p + q;
        assert_eq!(
            fp.rational_part[&rat(0, 1)],
            Partition::from_counts(&[(2, 2 * a), (1, n - 4 * a)])
        );
    }
}

#[test]
fn maximal_timelike_scan_is_consistent_with_two_to_the_fourth() {
    let s = sig(4, 4);
    let r = r_phi_a(s, 2).unwrap();
    let cfg = ScanConfig {
        samples: 10,
        ..ScanConfig::default()
    };
    let v = test_type(
        &r,
        AdmissiblePair::new(s, 4, 0).unwrap(),
        Mode::Jordan,
        &cfg,
    )
    .unwrap();
    assert_eq!(v.kind, VerdictKind::ConsistentAfterNSamples);
    assert_eq!(v.fingerprint.unwrap().to_string(), "{0 -> 2^4}");
}

#[test]
fn pinned_box_sample() {
    // regression data: generated once from seed 42 and frozen
    let s = sig(2, 2);
    let sigma = sample_subspace(s, AdmissiblePair::new(s, 1, 1).unwrap(), 42, 3, 10_000).unwrap();
    let inertia = sigma.signature();
    assert_eq!((inertia.neg, inertia.pos, inertia.null), (1, 1, 0));
    assert_eq!(sigma.to_string(), "span{[1, 3, 1, -1], [-2, -1, 2, 2]}");
}
