use std::fmt;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted when building a [`SymMatrix`] from raw rows.
pub const SYMMETRY_REL_TOL: f64 = 1e-9;

/// Dense symmetric real matrix, `n >= 1`.
///
/// Both triangles are stored. Construction validates symmetry against a
/// relative tolerance and then mirrors the average, so `get(i, j) == get(j, i)`
/// holds bitwise for every value of this type.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    inner: DenseMatrix,
}

impl SymMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_dense(DenseMatrix::from_rows(rows)?, SYMMETRY_REL_TOL)
    }

    /// Accepts `m` when every `|m_ij - m_ji| <= rel_tol * max|m|`.
    pub fn from_dense(m: DenseMatrix, rel_tol: f64) -> Result<Self> {
        if m.rows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                left: m.rows(),
                right: m.cols(),
            });
        }
        let n = m.rows();
        let allowed = rel_tol * m.max_abs();
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (m.get(i, j) - m.get(j, i)).abs();
                if gap > allowed && worst.is_none_or(|w| gap > w.2) {
                    worst = Some((i, j, gap));
                }
            }
        }
        if let Some((i, j, gap)) = worst {
            return Err(Error::Asymmetric { i, j, gap });
        }
        Ok(Self::symmetrized(&m))
    }

    /// `(m + m^T) / 2` without any tolerance check.
    pub(crate) fn symmetrized(m: &DenseMatrix) -> Self {
        let n = m.rows();
        Self {
            inner: DenseMatrix::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i))),
        }
    }

    /// Builds from the upper triangle: `f` is called for `i <= j` only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n >= 1, "SymMatrix needs n >= 1");
        let mut inner = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                inner.set(i, j, v);
                inner.set(j, i, v);
            }
        }
        Self { inner }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| 0.0)
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.inner
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        Self {
            inner: self.inner.scaled(c),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &SymMatrix, c: f64) -> SymMatrix {
        Self {
            inner: self.inner.add_scaled(&other.inner, c),
        }
    }

    /// Lower-right block starting at row/column `start` (0-based).
    pub fn trailing_block(&self, start: usize) -> SymMatrix {
        assert!(start < self.n());
        Self::from_fn(self.n() - start, |i, j| self.get(start + i, start + j))
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.inner.matvec(x)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        self.inner.matmul(other)
    }

    pub fn inf_norm(&self) -> f64 {
        self.inner.inf_norm()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.inner.max_abs_diff(&other.inner)
    }

    /// Simultaneous row/column permutation: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> SymMatrix {
        self.principal(perm)
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}
