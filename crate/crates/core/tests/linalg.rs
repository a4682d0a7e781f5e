mod common;

use common::*;
use elastonet::linalg::{is_psd, sym_eig, PINV_TOL};
use elastonet::{schur_complement, BlockPartition, Complex64, Error, SchurMode, SymMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn partition(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> BlockPartition {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(r);
    let nb = r.random_range(1..n);
    let (b, i) = idx.split_at(nb);
    BlockPartition::new(b.to_vec(), i.to_vec(), n).unwrap()
}

/// Random complex symmetric matrix whose interior block is well
/// conditioned.
fn complex_sym_with_good_interior(r: &mut rand_chacha::ChaCha8Rng, n: usize, p: &BlockPartition) -> SymMatrix<Complex64> {
    let a = random_complex(r, n, n);
    let mut s = (&a + a.transpose()) * Complex64::new(0.5, 0.0);
    for &i in p.interior() {
        s[(i, i)] += Complex64::new(n as f64, 0.5 * n as f64);
    }
    SymMatrix::new(s).unwrap()
}

#[test]
fn schur_two_by_two() {
    let a = SymMatrix::<f64>::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
    let p = BlockPartition::new(vec![0], vec![1], 2).unwrap();
    let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
    assert_eq!(s.order(), 1);
    assert!((s[(0, 0)] - (2.0 - 1.0 * 0.5 * 1.0)).abs() < 1e-15);
}

#[test]
fn schur_of_identity_is_identity() {
    for (b, i) in [(vec![0, 2], vec![1, 3]), (vec![3], vec![0, 1, 2]), (vec![1, 0, 2], vec![3])] {
        let p = BlockPartition::new(b.clone(), i, 4).unwrap();
        let s = schur_complement(&SymMatrix::<f64>::identity(4), &p, SchurMode::Inverse, 1e-10).unwrap();
        assert_eq!(s.matrix(), &DMatrix::identity(b.len(), b.len()));
    }
}

#[test]
fn chain_pseudoinverse_gives_series_stiffness() {
    // nodes (0,0), (1,0), (2,0); unit springs along x
    let mut k = DMatrix::zeros(6, 6);
    for (i, j) in [(0usize, 1usize), (1, 2)] {
        k[(2 * i, 2 * i)] += 1.0;
        k[(2 * j, 2 * j)] += 1.0;
        k[(2 * i, 2 * j)] -= 1.0;
        k[(2 * j, 2 * i)] -= 1.0;
    }
    let k = SymMatrix::new(k).unwrap();
    let p = BlockPartition::new(vec![0, 1, 4, 5], vec![2, 3], 6).unwrap();
    assert_eq!(k.principal(&[2, 3]).matrix(), &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]));
    assert!(matches!(
        schur_complement(&k, &p, SchurMode::Inverse, PINV_TOL),
        Err(Error::SingularBlock { .. })
    ));
    let s = schur_complement(&k, &p, SchurMode::Pseudoinverse, PINV_TOL).unwrap();
    // least-squares equilibrium: the middle node sits at the mean of its
    // neighbours along x, giving a series spring 1/(1/1 + 1/1)
    let series = 1.0 / (1.0 / 1.0 + 1.0 / 1.0);
    let want = DMatrix::from_row_slice(
        4,
        4,
        &[series, 0.0, -series, 0.0, 0.0, 0.0, 0.0, 0.0, -series, 0.0, series, 0.0, 0.0, 0.0, 0.0, 0.0],
    );
    assert!(max_abs(&(s.matrix() - want)) < 1e-14);
}

#[test]
fn sym_eig_examples() {
    let e = sym_eig(&SymMatrix::<f64>::from_diagonal(&[3.0, 1.0]));
    assert_eq!(e.values.as_slice(), &[1.0, 3.0]);
    assert!((e.vectors[(1, 0)].abs() - 1.0).abs() < 1e-15 && e.vectors[(0, 0)].abs() < 1e-15);
    assert!((e.vectors[(0, 1)].abs() - 1.0).abs() < 1e-15 && e.vectors[(1, 1)].abs() < 1e-15);

    let e = sym_eig(&SymMatrix::<f64>::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap());
    assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
    let h = 1.0 / 2f64.sqrt();
    // eigenvectors are unique up to sign
    let v0 = e.vectors.column(0) * e.vectors[(0, 0)].signum();
    let v1 = e.vectors.column(1) * e.vectors[(0, 1)].signum();
    assert!((v0[0] - h).abs() < 1e-15 && (v0[1] + h).abs() < 1e-15);
    assert!((v1[0] - h).abs() < 1e-15 && (v1[1] - h).abs() < 1e-15);
}

#[test]
fn gram_matrix_eigenvalues_nonnegative() {
    let mut r = rng(6);
    for _ in 0..20 {
        let g = random_gram(&mut r, 6);
        let e = sym_eig(&SymMatrix::new(g).unwrap());
        assert!(e.values.iter().all(|&x| x >= -1e-12));
    }
}

#[test]
fn is_psd_examples() {
    assert!(is_psd(&SymMatrix::from_diagonal(&[1.0, 0.0]), 1e-10));
    assert!(!is_psd(&SymMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).unwrap(), 1e-10));
    assert!(is_psd(&SymMatrix::<f64>::zeros(3), 1e-10));
}

#[test]
fn symmetry_enforced_at_construction() {
    let mut a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    a[(0, 1)] += 1e-14;
    let s = SymMatrix::new(a.clone()).unwrap();
    assert_eq!(s[(0, 1)], s[(1, 0)]);
    a[(0, 1)] += 1e-6;
    assert!(matches!(SymMatrix::new(a), Err(Error::Asymmetric { .. })));
}

#[test]
fn schur_matches_elimination_oracle() {
    let mut r = rng(11);
    for _ in 0..50 {
        let n = r.random_range(2..9);
        let p = partition(&mut r, n);
        let a = complex_sym_with_good_interior(&mut r, n, &p);
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        let want = schur_oracle(a.matrix(), p.boundary(), p.interior());
        assert!(rel_c(s.matrix(), &want) < 1e-12);
    }
}

#[test]
fn sym_eig_single_precision() {
    let a = SymMatrix::<f32>::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
    let e = sym_eig(&a);
    assert!((e.values[0] - 1.0).abs() < 1e-6 && (e.values[1] - 3.0).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn schur_is_homogeneous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..9);
        let p = partition(&mut r, n);
        let a = complex_sym_with_good_interior(&mut r, n, &p);
        let mag: f64 = 10f64.powf(r.random_range(-1.0..1.0));
        let lambda = Complex64::from_polar(mag, r.random_range(0.0..std::f64::consts::TAU));
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        let scaled = schur_complement(&a.scale(lambda), &p, SchurMode::Inverse, 1e-10).unwrap();
        let want = s.matrix() * lambda;
        prop_assert!(rel_c(scaled.matrix(), &want) <= 1e-10);
    }

    #[test]
    fn schur_quadratic_form_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..9);
        let p = partition(&mut r, n);
        let a = complex_sym_with_good_interior(&mut r, n, &p);
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        let vb = random_complex(&mut r, p.boundary().len(), 1);
        let m = a.matrix();
        let pick = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
        let ii = pick(p.interior(), p.interior());
        let ib = pick(p.interior(), p.boundary());
        let vi = -solve_oracle(&ii, &(ib * &vb));
        let mut v = DMatrix::zeros(n, 1);
        for (k, &i) in p.boundary().iter().enumerate() { v[(i, 0)] = vb[(k, 0)]; }
        for (k, &i) in p.interior().iter().enumerate() { v[(i, 0)] = vi[(k, 0)]; }
        let lhs = (vb.adjoint() * s.matrix() * &vb)[(0, 0)];
        let rhs = (v.adjoint() * m * &v)[(0, 0)];
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(lhs.norm()).max(1e-300));
    }

    #[test]
    fn schur_preserves_sign_of_real_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..9);
        let p = partition(&mut r, n);
        let mut re = random_gram(&mut r, n);
        for &i in p.interior() { re[(i, i)] += 0.1; }
        let im = random_symmetric(&mut r, n);
        let a = SymMatrix::new(DMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))).unwrap();
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        prop_assert!(oracle_min_eig_rel(s.real_part().matrix()) >= -1e-9);
    }

    #[test]
    fn schur_preserves_sign_of_imaginary_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(2..9);
        let p = partition(&mut r, n);
        let re = random_symmetric(&mut r, n);
        let mut im = random_gram(&mut r, n);
        for &i in p.interior() { im[(i, i)] += 0.1; }
        let a = SymMatrix::new(DMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))).unwrap();
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        prop_assert!(oracle_min_eig_rel(s.imag_part().matrix()) >= -1e-9);
        // reverse inequality
        let neg = a.scale(Complex64::new(1.0, 0.0)).matrix().map(|z| Complex64::new(z.re, -z.im));
        let s_neg = schur_complement(&SymMatrix::new(neg).unwrap(), &p, SchurMode::Inverse, 1e-10).unwrap();
        prop_assert!(oracle_min_eig_rel(&-s_neg.imag_part().matrix()) >= -1e-9);
    }

    #[test]
    fn schur_nests(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(3..10);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut r);
        let nb = r.random_range(1..n - 1);
        let n1 = r.random_range(1..n - nb);
        let (b, rest) = idx.split_at(nb);
        let (i1, i2) = rest.split_at(n1);
        let one = BlockPartition::new(b.to_vec(), rest.to_vec(), n).unwrap();
        let a = complex_sym_with_good_interior(&mut r, n, &one);
        let direct = schur_complement(&a, &one, SchurMode::Inverse, 1e-10).unwrap();
        // first eliminate i2 keeping b ∪ i1, then i1
        let keep: Vec<usize> = b.iter().chain(i1).copied().collect();
        let first = BlockPartition::new(keep, i2.to_vec(), n).unwrap();
        let stage = schur_complement(&a, &first, SchurMode::Inverse, 1e-10).unwrap();
        let second = BlockPartition::new((0..nb).collect(), (nb..nb + i1.len()).collect(), nb + i1.len()).unwrap();
        let nested = schur_complement(&stage, &second, SchurMode::Inverse, 1e-10).unwrap();
        prop_assert!(rel_c(nested.matrix(), direct.matrix()) <= 1e-10);
    }

    #[test]
    fn sym_eig_reconstructs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..10);
        let a = SymMatrix::new(random_symmetric(&mut r, n)).unwrap();
        let e = sym_eig(&a);
        let u = &e.vectors;
        let ortho = u.transpose() * u - DMatrix::identity(n, n);
        prop_assert!(max_abs(&ortho) <= 1e-12);
        let recon = u * DMatrix::from_diagonal(&e.values) * u.transpose();
        prop_assert!(max_abs(&(recon - a.matrix())) <= 1e-10 * a.max_abs());
        prop_assert!(e.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
        let oracle = jacobi_eigenvalues(a.matrix());
        for (x, y) in e.values.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + a.max_abs()));
        }
    }
}
