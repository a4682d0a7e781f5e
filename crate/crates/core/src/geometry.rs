//! Point and force-system geometry in two or three dimensions.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Real;

/// `x × f`: a scalar (length-1 vector) for d = 2, a 3-vector for d = 3.
pub fn cross<T: Real>(x: &[T], f: &[T]) -> Vec<T> {
    match x.len() {
        2 => vec![x[0] * f[1] - x[1] * f[0]],
        3 => vec![
            x[1] * f[2] - x[2] * f[1],
            x[2] * f[0] - x[0] * f[2],
            x[0] * f[1] - x[1] * f[0],
        ],
        d => panic!("cross product undefined for dimension {d}"),
    }
}

/// Net force and net torque of forces `f` (stacked, `d` per point) supported
/// at `positions`.
pub fn force_and_torque<T: Real>(f: &[T], positions: &[Vec<T>]) -> (Vec<T>, Vec<T>) {
    let d = positions.first().map_or(2, |p| p.len());
    let mut force = vec![T::zero(); d];
    let mut torque = vec![T::zero(); if d == 2 { 1 } else { 3 }];
    for (p, fi) in positions.iter().zip(f.chunks(d)) {
        for k in 0..d {
            force[k] += fi[k];
        }
        for (t, c) in torque.iter_mut().zip(cross(p, fi)) {
            *t += c;
        }
    }
    (force, torque)
}

/// Largest absolute component of the net force and net torque.
pub fn balance_residual<T: Real>(f: &[T], positions: &[Vec<T>]) -> T {
    let (force, torque) = force_and_torque(f, positions);
    force
        .iter()
        .chain(torque.iter())
        .fold(T::zero(), |acc, &x| acc.max(x.abs()))
}

/// Infinitesimal rigid motions of the points (translations, then
/// rotations) as columns. A force system is balanced exactly when it is
/// orthogonal to every column.
pub fn rigid_motions<T: Real>(positions: &[Vec<T>]) -> DMatrix<T> {
    let d = positions.first().map_or(2, |p| p.len());
    let n_rot = if d == 2 { 1 } else { 3 };
    let mut out = DMatrix::zeros(positions.len() * d, d + n_rot);
    for (i, x) in positions.iter().enumerate() {
        for a in 0..d {
            out[(i * d + a, a)] = T::one();
        }
        for r in 0..n_rot {
            let mut axis = vec![T::zero(); 3];
            axis[if d == 2 { 2 } else { r }] = T::one();
            let x3 = [x[0], x[1], if d == 3 { x[2] } else { T::zero() }];
            let v = cross(&axis, &x3);
            for a in 0..d {
                out[(i * d + a, d + r)] = v[a];
            }
        }
    }
    out
}

pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

pub fn norm<T: Real>(v: &[T]) -> T {
    norm_sqr(v).sqrt()
}

pub fn norm_sqr<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

pub fn diameter<T: Real>(points: &[Vec<T>]) -> T {
    let mut best = T::zero();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(distance(a, b));
        }
    }
    best
}

/// Euclidean distance from `p` to the convex hull of `points`.
///
/// Exact: the nearest hull point lies in the relative interior of a simplex
/// spanned by at most `d + 1` of the points, so every such subset is
/// projected and the feasible projections compared.
pub fn distance_to_hull<T: Real>(p: &[T], points: &[Vec<T>]) -> T {
    assert!(!points.is_empty(), "hull of an empty point set");
    let d = p.len();
    let mut best = points
        .iter()
        .map(|q| distance(p, q))
        .fold(T::max_value().unwrap(), |a, b| a.min(b));
    let max_k = (d + 1).min(points.len());
    let mut subset = Vec::with_capacity(max_k);
    for k in 2..=max_k {
        subsets(points.len(), k, 0, &mut subset, &mut |s| {
            if let Some(dist) = project_onto_simplex_face(p, points, s) {
                best = best.min(dist);
            }
        });
    }
    best
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Distance to the affine projection of `p` onto the subset, if the
/// projection has nonnegative barycentric weights and the subset is affinely
/// independent.
fn project_onto_simplex_face<T: Real>(p: &[T], points: &[Vec<T>], s: &[usize]) -> Option<T> {
    let d = p.len();
    let base = &points[s[0]];
    let m = s.len() - 1;
    let e = DMatrix::from_fn(d, m, |r, c| points[s[c + 1]][r] - base[r]);
    let rhs = DVector::from_fn(d, |r, _| p[r] - base[r]);
    let gram = e.transpose() * &e;
    let scale = gram.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    let chol = gram.clone().cholesky()?;
    // reject nearly dependent faces; smaller subsets cover them
    let diag_min = chol.l().diagonal().iter().fold(T::max_value().unwrap(), |a, &x| a.min(x));
    if diag_min * diag_min <= T::lit(1e-12) * scale {
        return None;
    }
    let t = chol.solve(&(e.transpose() * &rhs));
    let w0 = T::one() - t.sum();
    let slack = T::lit(-1e-12);
    if w0 < slack || t.iter().any(|&x| x < slack) {
        return None;
    }
    Some((e * t - rhs).norm())
}
