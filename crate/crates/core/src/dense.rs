//! Dense SVD and symmetric eigendecomposition, computed in `f64` by `faer`
//! and returned as `nalgebra` matrices over the caller's scalar.

use faer::{c64, Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nalgebra::DMatrix;

use crate::scalar::{Cx, Real};

/// Thin SVD with singular values descending.
pub(crate) struct Svd<N> {
    pub s: Vec<f64>,
    pub u: DMatrix<N>,
    pub v: DMatrix<N>,
}

pub(crate) fn real_svd<T: Real>(a: &DMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Svd {
            s: Vec::new(),
            u: DMatrix::zeros(m, 0),
            v: DMatrix::zeros(n, 0),
        };
    }
    let fa = Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)].as_f64());
    let (u, v, s) = real_factors(&fa);
    let k = m.min(n);
    Svd {
        s: (0..k).map(|i| s[i]).collect(),
        u: DMatrix::from_fn(m, k, |i, j| T::lit(u[(i, j)])),
        v: DMatrix::from_fn(n, k, |i, j| T::lit(v[(i, j)])),
    }
}

pub(crate) fn complex_svd<T: Real>(a: &DMatrix<Cx<T>>) -> Svd<Cx<T>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Svd {
            s: Vec::new(),
            u: DMatrix::zeros(m, 0),
            v: DMatrix::zeros(n, 0),
        };
    }
    let fa = Mat::<c64>::from_fn(m, n, |i, j| c64::new(a[(i, j)].re.as_f64(), a[(i, j)].im.as_f64()));
    let (u, v, s) = complex_factors(&fa);
    let k = m.min(n);
    let back = |z: c64| Cx::new(T::lit(z.re), T::lit(z.im));
    Svd {
        s: (0..k).map(|i| s[i]).collect(),
        u: DMatrix::from_fn(m, k, |i, j| back(u[(i, j)])),
        v: DMatrix::from_fn(n, k, |i, j| back(v[(i, j)])),
    }
}

const MIXING_ATTEMPTS: u64 = 4;

/// Householder reflector `I − 2wwᵀ/|w|²` with a dense pseudo-random `w`.
fn reflector(n: usize, attempt: u64) -> Mat<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5d_0000 + attempt);
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let w2: f64 = w.iter().map(|x| x * x).sum();
    Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * w[i] * w[j] / w2)
}

// The iterative SVD occasionally stalls on structured input (for instance
// block-diagonal pencils of independent subnetworks). Since
// A Q = U S (Qᵀ V)ᵀ for orthogonal Q, a failed attempt is retried on A Q with
// a random reflector and V recovered as Q V'.
fn real_factors(a: &Mat<f64>) -> (Mat<f64>, Mat<f64>, Vec<f64>) {
    if let Ok(svd) = a.thin_svd() {
        let s = svd.S().column_vector();
        return (svd.U().to_owned(), svd.V().to_owned(), (0..s.nrows()).map(|i| s[i]).collect());
    }
    for attempt in 0..MIXING_ATTEMPTS {
        let q = reflector(a.ncols(), attempt);
        if let Ok(svd) = (a * &q).thin_svd() {
            let s = svd.S().column_vector();
            return (svd.U().to_owned(), &q * svd.V(), (0..s.nrows()).map(|i| s[i]).collect());
        }
    }
    panic!("svd failed to converge on a {}x{} matrix", a.nrows(), a.ncols());
}

fn complex_factors(a: &Mat<c64>) -> (Mat<c64>, Mat<c64>, Vec<f64>) {
    if let Ok(svd) = a.thin_svd() {
        let s = svd.S().column_vector();
        return (svd.U().to_owned(), svd.V().to_owned(), (0..s.nrows()).map(|i| s[i].re).collect());
    }
    for attempt in 0..MIXING_ATTEMPTS {
        let r = reflector(a.ncols(), attempt);
        let q = Mat::<c64>::from_fn(r.nrows(), r.ncols(), |i, j| c64::new(r[(i, j)], 0.0));
        if let Ok(svd) = (a * &q).thin_svd() {
            let s = svd.S().column_vector();
            return (svd.U().to_owned(), &q * svd.V(), (0..s.nrows()).map(|i| s[i].re).collect());
        }
    }
    panic!("svd failed to converge on a {}x{} matrix", a.nrows(), a.ncols());
}

/// Eigenvalues ascending with orthonormal eigenvectors as columns.
pub(crate) fn real_sym_eig<T: Real>(a: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let fa = Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)].as_f64());
    let eig = fa.self_adjoint_eigen(Side::Lower).expect("eigendecomposition failed to converge");
    let (u, s) = (eig.U(), eig.S().column_vector());
    (
        (0..n).map(|i| T::lit(s[i])).collect(),
        DMatrix::from_fn(n, n, |i, j| T::lit(u[(i, j)])),
    )
}
