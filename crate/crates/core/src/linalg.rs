//! Dense symmetric matrix utilities: Schur complements, symmetric
//! eigendecomposition and positive-semidefiniteness tests.
//!
//! Matrices here are small (a few hundred rows at most) and always dense.

use nalgebra::{ComplexField, DMatrix, DVector, RealField};

use crate::dense;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Relative asymmetry accepted by [`SymMatrix::new`] before averaging.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative truncation threshold for pseudoinverses.
pub const PINV_TOL: f64 = 1e-10;

/// A square matrix with `m[(i, j)] == m[(j, i)]` exactly.
///
/// The entries may be real or complex; complex matrices are symmetric
/// (`Aᵀ = A`), not Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<N: nalgebra::Scalar> {
    inner: DMatrix<N>,
}

impl<N> SymMatrix<N>
where
    N: ComplexField + Copy,
    N::RealField: Real,
{
    /// Builds a symmetric matrix, averaging `(A + Aᵀ)/2`.
    ///
    /// Fails when the input asymmetry exceeds `1e-12 · max|entry|`.
    pub fn new(m: DMatrix<N>) -> Result<Self> {
        Self::with_tolerance(m, N::RealField::lit(SYMMETRY_TOL))
    }

    /// Like [`SymMatrix::new`] with an explicit relative asymmetry bound.
    pub fn with_tolerance(m: DMatrix<N>, rel_tol: N::RealField) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let asym = asymmetry(&m);
        let allowed = rel_tol * max_abs(&m);
        if asym > allowed {
            return Err(Error::Asymmetric {
                asymmetry: asym.as_f64(),
                allowed: allowed.as_f64(),
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// Averages `(A + Aᵀ)/2` without checking the asymmetry. Used for the
    /// results of computations whose rounding is bounded by the operands
    /// rather than by the result.
    pub fn symmetrize(m: DMatrix<N>) -> Self {
        assert!(m.is_square(), "symmetrize: non-square {}x{}", m.nrows(), m.ncols());
        let half: N = nalgebra::convert(0.5);
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)]) * half;
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Self { inner: out }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn from_diagonal(d: &[N]) -> Self {
        Self {
            inner: DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<N> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<N> {
        self.inner
    }

    pub fn max_abs(&self) -> N::RealField {
        max_abs(&self.inner)
    }

    pub fn scale(&self, s: N) -> Self {
        Self {
            inner: self.inner.map(|x| x * s),
        }
    }

    /// Restriction to the rows and columns in `idx`, in that order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self {
            inner: submatrix(&self.inner, idx, idx),
        }
    }
}

impl<N> std::ops::Index<(usize, usize)> for SymMatrix<N>
where
    N: nalgebra::Scalar,
{
    type Output = N;
    fn index(&self, ij: (usize, usize)) -> &N {
        &self.inner[ij]
    }
}

impl<T: Real> SymMatrix<T> {
    pub fn to_complex(&self) -> SymMatrix<Cx<T>> {
        SymMatrix {
            inner: self.inner.map(|x| Cx::new(x, T::zero())),
        }
    }

    /// `self + other` (entrywise; both already symmetric).
    pub fn add(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }
}

impl<T: Real> SymMatrix<Cx<T>> {
    pub fn real_part(&self) -> SymMatrix<T> {
        SymMatrix {
            inner: self.inner.map(|z| z.re),
        }
    }

    pub fn imag_part(&self) -> SymMatrix<T> {
        SymMatrix {
            inner: self.inner.map(|z| z.im),
        }
    }
}

/// Ordered split of `0..order` into boundary `B` and interior `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    boundary: Vec<usize>,
    interior: Vec<usize>,
}

impl BlockPartition {
    pub fn new(boundary: Vec<usize>, interior: Vec<usize>, order: usize) -> Result<Self> {
        let mut seen = vec![false; order];
        for &i in boundary.iter().chain(interior.iter()) {
            if i >= order {
                return Err(Error::InvalidPartition(format!(
                    "index {i} out of range for order {order}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("index {i} listed twice")));
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} not covered")));
        }
        Ok(Self { boundary, interior })
    }

    /// Boundary = indices whose mask entry is `true`, both sets ascending.
    pub fn from_mask(is_boundary: &[bool]) -> Self {
        let (mut boundary, mut interior) = (Vec::new(), Vec::new());
        for (i, &b) in is_boundary.iter().enumerate() {
            if b {
                boundary.push(i);
            } else {
                interior.push(i);
            }
        }
        Self { boundary, interior }
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn order(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }
}

/// How the interior block is inverted in [`schur_complement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurMode {
    /// Plain inverse; the interior block must be numerically nonsingular.
    Inverse,
    /// Moore–Penrose pseudoinverse with relative truncation.
    Pseudoinverse,
}

/// `S = A_BB − A_BI A_II^{-1 or †} A_IB`.
///
/// Singular values of `A_II` at or below `tol · σ_max` count as zero: an
/// error for [`SchurMode::Inverse`], truncated for [`SchurMode::Pseudoinverse`].
pub fn schur_complement<N>(
    a: &SymMatrix<N>,
    p: &BlockPartition,
    mode: SchurMode,
    tol: N::RealField,
) -> Result<SymMatrix<N>>
where
    N: ComplexField + Copy,
    N::RealField: Real,
{
    schur_with_rank(a, p, |s| {
        let n = s.len();
        let largest = s[0];
        let cut = tol * largest;
        match mode {
            SchurMode::Inverse => {
                let smallest = s[n - 1];
                if smallest <= cut {
                    Err(Error::SingularBlock {
                        smallest: smallest.as_f64(),
                        largest: largest.as_f64(),
                    })
                } else {
                    Ok(n)
                }
            }
            SchurMode::Pseudoinverse => Ok(s.iter().filter(|&&x| x > cut).count()),
        }
    })
}

/// Schur complement where `rank` picks how many leading singular values of
/// `A_II` (descending) are inverted; the rest are treated as zero.
pub(crate) fn schur_with_rank<N, F>(
    a: &SymMatrix<N>,
    p: &BlockPartition,
    rank: F,
) -> Result<SymMatrix<N>>
where
    N: ComplexField + Copy,
    N::RealField: Real,
    F: FnOnce(&[N::RealField]) -> Result<usize>,
{
    if p.order() != a.order() {
        return Err(Error::DimensionMismatch(format!(
            "partition of order {} applied to matrix of order {}",
            p.order(),
            a.order()
        )));
    }
    let m = a.matrix();
    let bb = submatrix(m, &p.boundary, &p.boundary);
    if p.interior.is_empty() {
        return Ok(SymMatrix { inner: bb });
    }
    let bi = submatrix(m, &p.boundary, &p.interior);
    let ii = submatrix(m, &p.interior, &p.interior);
    let ib = bi.transpose();

    let x = pinv_solve(&ii, &ib, rank)?;
    Ok(SymMatrix::symmetrize(bb - bi * x))
}

/// `A⁺ b` with the number of retained singular values chosen by `rank`
/// from the descending singular values of `A`.
fn pinv_solve<N, F>(a: &DMatrix<N>, b: &DMatrix<N>, rank: F) -> Result<DMatrix<N>>
where
    N: ComplexField + Copy,
    N::RealField: Real,
    F: FnOnce(&[N::RealField]) -> Result<usize>,
{
    type R<N> = <N as ComplexField>::RealField;
    let zero = R::<N>::zero();
    let complex = a.iter().chain(b.iter()).any(|x| x.imaginary() != zero);
    if !complex {
        let svd = dense::real_svd(&a.map(|x| x.real()));
        let s: Vec<R<N>> = svd.s.iter().map(|&x| R::<N>::lit(x)).collect();
        let r = rank(&s)?;
        let mut y = svd.u.columns(0, r).transpose() * b.map(|x| x.real());
        for (k, mut row) in y.row_iter_mut().enumerate() {
            row /= s[k];
        }
        return Ok((svd.v.columns(0, r) * y).map(N::from_real));
    }
    let to_cx = |m: &DMatrix<N>| m.map(|x| Cx::new(x.real(), x.imaginary()));
    let svd = dense::complex_svd(&to_cx(a));
    let s: Vec<R<N>> = svd.s.iter().map(|&x| R::<N>::lit(x)).collect();
    let r = rank(&s)?;
    let mut y = svd.u.columns(0, r).adjoint() * to_cx(b);
    for (k, mut row) in y.row_iter_mut().enumerate() {
        row /= Cx::new(s[k], zero);
    }
    let x = svd.v.columns(0, r) * y;
    // N is complex here, so sqrt(−1) is the imaginary unit
    let i_unit = N::from_real(-R::<N>::one()).sqrt();
    Ok(x.map(|z| N::from_real(z.re) + i_unit * N::from_real(z.im)))
}

/// Real symmetric eigendecomposition with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEig<T: Real> {
    pub values: DVector<T>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<T>,
}

pub fn sym_eig<T: Real>(a: &SymMatrix<T>) -> SymEig<T> {
    let (values, vectors) = dense::real_sym_eig(a.matrix());
    SymEig {
        values: DVector::from_vec(values),
        vectors,
    }
}

/// Extreme eigenvalues `(min, max)`; `(0, 0)` for an empty matrix.
pub fn eig_range<T: Real>(a: &SymMatrix<T>) -> (T, T) {
    if a.order() == 0 {
        return (T::zero(), T::zero());
    }
    let v = sym_eig(a).values;
    (v[0], v[v.len() - 1])
}

/// `min eig ≥ −tol · max(1, max eig)`.
pub fn is_psd<T: Real>(a: &SymMatrix<T>, tol: T) -> bool {
    psd_violation(a) <= tol
}

/// Smallest `t ≥ 0` such that `min eig ≥ −t · max(1, max eig)`.
pub fn psd_violation<T: Real>(a: &SymMatrix<T>) -> T {
    let (lo, hi) = eig_range(a);
    let scale = if hi > T::one() { hi } else { T::one() };
    let v = -lo / scale;
    if v > T::zero() {
        v
    } else {
        T::zero()
    }
}

pub(crate) fn submatrix<N: nalgebra::Scalar + Copy + num_traits::Zero>(
    m: &DMatrix<N>,
    rows: &[usize],
    cols: &[usize],
) -> DMatrix<N> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Largest entry modulus; zero for an empty matrix.
pub fn max_abs<N>(m: &DMatrix<N>) -> N::RealField
where
    N: ComplexField + Copy,
    N::RealField: Real,
{
    m.iter()
        .map(|x| x.modulus())
        .fold(N::RealField::zero(), |acc, x| if x > acc { x } else { acc })
}

fn asymmetry<N>(m: &DMatrix<N>) -> N::RealField
where
    N: ComplexField + Copy,
    N::RealField: Real,
{
    let n = m.nrows();
    let mut worst = N::RealField::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (m[(i, j)] - m[(j, i)]).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `max|a − b| / max|b|`, with `0` when both vanish.
pub fn rel_error<N>(a: &DMatrix<N>, b: &DMatrix<N>) -> N::RealField
where
    N: ComplexField + Copy,
    N::RealField: Real,
{
    let diff = max_abs(&(a - b));
    if diff == N::RealField::zero() {
        return diff;
    }
    let scale = max_abs(b);
    if scale == N::RealField::zero() {
        <N::RealField as RealField>::max_value().unwrap_or(diff)
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn sym(m: DMatrix<f64>) -> SymMatrix<f64> {
        SymMatrix::new(m).unwrap()
    }

    #[test]
    fn schur_two_by_two() {
        let a = sym(dmatrix![2.0, 1.0; 1.0, 2.0]);
        let p = BlockPartition::new(vec![0], vec![1], 2).unwrap();
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        assert!((s[(0, 0)] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn schur_of_identity_is_identity() {
        let a = SymMatrix::<f64>::identity(5);
        let p = BlockPartition::new(vec![4, 1], vec![0, 2, 3], 5).unwrap();
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-10).unwrap();
        assert_eq!(s, SymMatrix::identity(2));
    }

    #[test]
    fn singular_block_reports_smallest_value() {
        let a = sym(dmatrix![1.0, 0.0, 0.0; 0.0, 2.0, 0.0; 0.0, 0.0, 0.0]);
        let p = BlockPartition::new(vec![0], vec![1, 2], 3).unwrap();
        match schur_complement(&a, &p, SchurMode::Inverse, 1e-10) {
            Err(Error::SingularBlock { smallest, largest }) => {
                assert_eq!(smallest, 0.0);
                assert_eq!(largest, 2.0);
            }
            other => panic!("expected SingularBlock, got {other:?}"),
        }
        let s = schur_complement(&a, &p, SchurMode::Pseudoinverse, 1e-10).unwrap();
        assert_eq!(s[(0, 0)], 1.0);
    }

    #[test]
    fn asymmetric_input_rejected_and_small_noise_averaged() {
        let bad = dmatrix![1.0, 2.0; 0.0, 1.0];
        assert!(matches!(SymMatrix::new(bad), Err(Error::Asymmetric { .. })));
        let noisy = dmatrix![1.0, 2.0; 2.0 + 1e-15, 1.0];
        let s = SymMatrix::new(noisy).unwrap();
        assert_eq!(s[(0, 1)], s[(1, 0)]);
        assert!(matches!(
            SymMatrix::new(DMatrix::<f64>::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn partition_validation() {
        assert!(BlockPartition::new(vec![0, 1], vec![1], 2).is_err());
        assert!(BlockPartition::new(vec![0], vec![], 2).is_err());
        assert!(BlockPartition::new(vec![0], vec![5], 2).is_err());
        let p = BlockPartition::from_mask(&[true, false, true]);
        assert_eq!(p.boundary(), &[0, 2]);
        assert_eq!(p.interior(), &[1]);
    }

    #[test]
    fn eig_of_diagonal_and_swap() {
        let e = sym_eig(&sym(dmatrix![3.0, 0.0; 0.0, 1.0]));
        assert_eq!(e.values.as_slice(), &[1.0, 3.0]);
        assert!((e.vectors[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].abs() - 1.0).abs() < 1e-15);

        let e = sym_eig(&sym(dmatrix![0.0, 1.0; 1.0, 0.0]));
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // columns fixed up to sign
        let c0 = e.vectors.column(0);
        let c1 = e.vectors.column(1);
        assert!((c0[0] * c0[1] + h * h).abs() < 1e-14);
        assert!((c1[0] * c1[1] - h * h).abs() < 1e-14);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&sym(dmatrix![1.0, 0.0; 0.0, 0.0]), 1e-10));
        assert!(!is_psd(&sym(dmatrix![1.0, 2.0; 2.0, 1.0]), 1e-10));
        assert!(is_psd(&SymMatrix::<f64>::zeros(3), 1e-10));
        assert!(is_psd(&SymMatrix::<f64>::zeros(0), 1e-10));
    }

    #[test]
    fn rel_error_conventions() {
        let z = DMatrix::<f64>::zeros(2, 2);
        assert_eq!(rel_error(&z, &z), 0.0);
        let a = dmatrix![1.0, 0.0; 0.0, 2.0];
        let b = dmatrix![1.0, 0.0; 0.0, 4.0];
        assert_eq!(rel_error(&a, &b), 0.5);
    }

    #[test]
    fn works_in_single_precision() {
        let a = SymMatrix::<f32>::new(dmatrix![2.0f32, 1.0; 1.0, 2.0]).unwrap();
        let p = BlockPartition::new(vec![0], vec![1], 2).unwrap();
        let s = schur_complement(&a, &p, SchurMode::Inverse, 1e-5).unwrap();
        assert!((s[(0, 0)] - 1.5).abs() < 1e-6);
    }
}
