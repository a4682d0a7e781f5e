//! Row-major matrix and `[re, im]` complex encodings for JSON.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

pub fn to_rows<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows<T: Real>(rows: &[Vec<T>], what: &str) -> Result<DMatrix<T>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "{what}: row {bad} has {} entries, expected {cols}",
            rows[bad].len()
        )));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::DimensionMismatch(format!("{what}: non-finite entry")));
    }
    Ok(DMatrix::from_fn(n, cols, |i, j| rows[i][j]))
}

/// A complex number as a two-element `[re, im]` array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair<T>(pub T, pub T);

impl<T: Real> From<Cx<T>> for ComplexPair<T> {
    fn from(z: Cx<T>) -> Self {
        Self(z.re, z.im)
    }
}

impl<T: Real> From<ComplexPair<T>> for Cx<T> {
    fn from(p: ComplexPair<T>) -> Self {
        Cx::new(p.0, p.1)
    }
}

pub fn complex_rows<T: Real>(m: &DMatrix<Cx<T>>) -> Vec<Vec<ComplexPair<T>>> {
    m.row_iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect()
}
