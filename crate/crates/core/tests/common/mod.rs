#![allow(dead_code)]

use elastonet::network::{Node, Spring};
use elastonet::{random_network, Complex64, Network, RandomNetworkSpec, Rayleigh};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn node(position: &[f64], mass: f64, terminal: bool) -> Node<f64> {
    Node {
        position: position.to_vec(),
        mass,
        terminal,
    }
}

pub fn spring(i: usize, j: usize, k: f64) -> Spring<f64> {
    Spring { i, j, k }
}

/// Collinear chain (0,0)–(1,0)–(2,0) with unit springs and a massless
/// interior middle node.
pub fn chain(rayleigh: Rayleigh) -> Network {
    Network::new(
        2,
        vec![
            node(&[0.0, 0.0], 0.0, true),
            node(&[1.0, 0.0], 0.0, false),
            node(&[2.0, 0.0], 0.0, true),
        ],
        vec![spring(0, 1, 1.0), spring(1, 2, 1.0)],
        rayleigh,
    )
    .unwrap()
}

/// Random network with 2–4 terminals, 2–6 interior nodes, a mix of massive
/// and massless interior nodes and random Rayleigh constants in [0, 2).
pub fn mixed_network(seed: u64) -> Network {
    let mut r = rng(seed ^ 0xa5a5_5a5a);
    let d = if r.random_bool(0.5) { 2 } else { 3 };
    let nt = r.random_range(2..=4);
    let ni = r.random_range(2..=6);
    let spec = RandomNetworkSpec::new(d, nt, ni, 0.5);
    random_network(seed, &spec).unwrap()
}

pub fn random_real(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0))
}

pub fn random_complex(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    })
}

/// `G Gᵀ` for a random `n × n` G.
pub fn random_gram(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = random_real(r, n, n);
    &g * g.transpose()
}

pub fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = random_real(r, n, n);
    (&a + a.transpose()) * 0.5
}

pub fn max_abs_c(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Relative difference `max|a − b| / max(max|b|, tiny)`.
pub fn rel_c(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    max_abs_c(&(a - b)) / max_abs_c(b).max(1e-300)
}

/// Sum of forces and torques (about the origin) of the force system `f`
/// supported at `x`, written out by hand for d = 2, 3.
pub fn balance_oracle(f: &[f64], x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = x[0].len();
    let mut force = vec![0.0; d];
    let mut torque = vec![0.0; if d == 2 { 1 } else { 3 }];
    for (p, fi) in x.iter().zip(f.chunks(d)) {
        for a in 0..d {
            force[a] += fi[a];
        }
        if d == 2 {
            torque[0] += p[0] * fi[1] - p[1] * fi[0];
        } else {
            torque[0] += p[1] * fi[2] - p[2] * fi[1];
            torque[1] += p[2] * fi[0] - p[0] * fi[2];
            torque[2] += p[0] * fi[1] - p[1] * fi[0];
        }
    }
    (force, torque)
}

pub fn balance_oracle_residual(f: &[f64], x: &[Vec<f64>]) -> f64 {
    let (a, b) = balance_oracle(f, x);
    a.iter().chain(&b).fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off < 1e-30 * (1.0 + max_abs(&a).powi(2)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// Smallest eigenvalue relative to `max(1, largest)`, by the Jacobi oracle.
pub fn oracle_min_eig_rel(m: &DMatrix<f64>) -> f64 {
    let v = jacobi_eigenvalues(m);
    if v.is_empty() {
        return 0.0;
    }
    v[0] / v[v.len() - 1].max(1.0)
}

/// Gaussian elimination with partial pivoting: `A⁻¹ B` (complex).
pub fn solve_oracle(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let mut a = a.clone();
    let mut b = b.clone();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[(i, col)].norm().partial_cmp(&a[(j, col)].norm()).unwrap()).unwrap();
        a.swap_rows(col, piv);
        b.swap_rows(col, piv);
        for row in (col + 1)..n {
            let f = a[(row, col)] / a[(col, col)];
            for k in col..n {
                let v = a[(col, k)];
                a[(row, k)] -= f * v;
            }
            for k in 0..b.ncols() {
                let v = b[(col, k)];
                b[(row, k)] -= f * v;
            }
        }
    }
    let mut x = DMatrix::zeros(n, b.ncols());
    for k in 0..b.ncols() {
        for row in (0..n).rev() {
            let mut s = b[(row, k)];
            for j in (row + 1)..n {
                s -= a[(row, j)] * x[(j, k)];
            }
            x[(row, k)] = s / a[(row, row)];
        }
    }
    x
}

/// `W(λ)` by explicit block elimination with the solve oracle; every
/// interior index must be invertible.
pub fn schur_oracle(full: &DMatrix<Complex64>, boundary: &[usize], interior: &[usize]) -> DMatrix<Complex64> {
    let pick = |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| full[(r[i], c[j])]);
    let bb = pick(boundary, boundary);
    if interior.is_empty() {
        return bb;
    }
    let bi = pick(boundary, interior);
    let ii = pick(interior, interior);
    let ib = pick(interior, boundary);
    bb - bi * solve_oracle(&ii, &ib)
}
