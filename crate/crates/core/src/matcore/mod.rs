//! Dense symmetric-matrix kernels and diagonal-dominance diagnostics.

mod dense;
mod eigen;
mod factor;
mod sym;

pub use dense::DenseMatrix;
pub use eigen::{sym_eigen, SymEigen, MAX_SWEEPS, RESIDUAL_REL_TOL};
pub use factor::{Cholesky, Lu};
pub use sym::{SymMatrix, SYMMETRY_REL_TOL};

use crate::error::{Error, Result};

/// Asymmetry allowed in a computed inverse before symmetrization.
pub const INVERSE_ASYMMETRY_TOL: f64 = 1e-8;

/// Row dominances `Delta_i = |J_ii| - sum_{j != i} |J_ij|`.
pub fn delta(j: &SymMatrix) -> Vec<f64> {
    (0..j.n())
        .map(|i| {
            let row = j.row(i);
            let off: f64 = row
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, v)| v.abs())
                .sum();
            row[i].abs() - off
        })
        .collect()
}

/// Extremal off-diagonal entries; absent when `n == 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffDiagonal {
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominanceReport {
    pub deltas: Vec<f64>,
    pub is_dominant: bool,
    pub is_balanced: bool,
    pub is_strictly_dominant: bool,
    /// `None` marks a 1x1 matrix, which has no off-diagonal entries.
    pub off_diagonal: Option<OffDiagonal>,
    pub max_delta: f64,
    pub tol: f64,
}

impl DominanceReport {
    pub fn min_offdiag(&self) -> Option<f64> {
        self.off_diagonal.map(|o| o.min)
    }

    pub fn max_offdiag(&self) -> Option<f64> {
        self.off_diagonal.map(|o| o.max)
    }
}

/// `1e-12 * ||J||_inf`, the tolerance used when callers have no better one.
pub fn default_tol(j: &SymMatrix) -> f64 {
    1e-12 * j.inf_norm()
}

pub fn classify(j: &SymMatrix, tol: f64) -> DominanceReport {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let deltas = delta(j);
    let n = j.n();
    let off_diagonal = (n >= 2).then(|| {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for a in 0..n {
            for b in (a + 1)..n {
                min = min.min(j.get(a, b));
                max = max.max(j.get(a, b));
            }
        }
        OffDiagonal { min, max }
    });
    DominanceReport {
        is_dominant: deltas.iter().all(|&d| d >= -tol),
        is_balanced: deltas.iter().all(|&d| d.abs() <= tol),
        is_strictly_dominant: deltas.iter().all(|&d| d > tol),
        max_delta: deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        off_diagonal,
        deltas,
        tol,
    }
}

/// `J^{-1}` through pivoted LU, symmetrized on return.
pub fn inverse_dense(j: &SymMatrix) -> Result<SymMatrix> {
    let inv = Lu::factor(j.as_dense())?.inverse();
    let scale = inv.max_abs().max(f64::MIN_POSITIVE);
    let gap = inv.max_abs_diff(&inv.transpose()) / scale;
    if gap > INVERSE_ASYMMETRY_TOL {
        return Err(Error::AsymmetricInverse { gap });
    }
    Ok(SymMatrix::symmetrized(&inv))
}

/// Determinant through pivoted LU.
pub fn det_dense(j: &SymMatrix) -> Result<f64> {
    Ok(Lu::factor(j.as_dense())?.det())
}

pub fn inf_norm(m: &SymMatrix) -> f64 {
    m.inf_norm()
}

/// All eigenvalues, ascending.
pub fn eigen_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    Ok(sym_eigen(m)?.values)
}

/// Inverse of `J + t u u^T` given `K = J^{-1}`.
pub fn smw_update(k: &SymMatrix, u: &[f64], t: f64) -> Result<SymMatrix> {
    if u.len() != k.n() {
        return Err(Error::DimensionMismatch {
            left: k.n(),
            right: u.len(),
        });
    }
    let ku = k.matvec(u);
    let quad: f64 = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
    let denom = 1.0 + t * quad;
    if denom.abs() <= 1e-12 * (1.0 + (t * quad).abs()) {
        return Err(Error::SingularUpdate { denom });
    }
    let c = t / denom;
    Ok(SymMatrix::from_fn(k.n(), |a, b| k.get(a, b) - c * ku[a] * ku[b]))
}

/// Loewner order: `A - B` has no eigenvalue below `-tol`.
pub fn loewner_geq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let diff = a.add_scaled(b, -1.0);
    let values = eigen_sym(&diff)?;
    Ok(values[0] >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_j() -> SymMatrix {
        SymMatrix::from_rows(&[
            vec![12.0, 4.0, 1.0, 7.0],
            vec![4.0, 9.0, 3.0, 2.0],
            vec![1.0, 3.0, 7.0, 3.0],
            vec![7.0, 2.0, 3.0, 12.0],
        ])
        .unwrap()
    }

    fn balanced_s4() -> SymMatrix {
        SymMatrix::from_fn(4, |i, j| if i == j { 3.0 } else { 1.0 })
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&SymMatrix::identity(3)), vec![1.0; 3]);
        assert_eq!(delta(&balanced_s4()), vec![0.0; 4]);
        assert_eq!(delta(&example_j()), vec![0.0; 4]);
    }

    #[test]
    fn classify_balanced_and_strict() {
        let r = classify(&balanced_s4(), 0.0);
        assert!(r.is_balanced && r.is_dominant && !r.is_strictly_dominant);

        let s3 = SymMatrix::from_fn(4, |i, j| if i == j { 4.0 } else { 1.0 });
        let r = classify(&s3, 0.0);
        assert!(r.is_strictly_dominant && r.is_dominant && !r.is_balanced);
        assert_eq!(r.deltas, vec![1.0; 4]);

        let h = SymMatrix::from_rows(&[
            vec![9.0, 1.0, 1.0, 7.0],
            vec![1.0, 6.0, 3.0, 2.0],
            vec![1.0, 3.0, 7.0, 3.0],
            vec![7.0, 2.0, 3.0, 12.0],
        ])
        .unwrap();
        let r = classify(&h, 0.0);
        assert!(r.is_balanced);
        assert_eq!(r.min_offdiag(), Some(1.0));
        assert_eq!(r.max_offdiag(), Some(7.0));
    }

    #[test]
    fn classify_one_by_one_has_no_offdiagonal() {
        let r = classify(&SymMatrix::diagonal(&[2.0]), 0.0);
        assert_eq!(r.off_diagonal, None);
        assert!(r.is_strictly_dominant);
    }

    #[test]
    fn inverse_dense_examples() {
        let i5 = SymMatrix::identity(5);
        assert!(inverse_dense(&i5).unwrap().max_abs_diff(&i5) < 1e-15);

        let inv = inverse_dense(&balanced_s4()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 5.0 / 12.0 } else { -1.0 / 12.0 };
                assert!((inv.get(a, b) - want).abs() < 1e-14);
            }
        }

        let j = SymMatrix::from_rows(&[
            vec![3.0, 2.0, 1.0],
            vec![2.0, 3.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ])
        .unwrap();
        let h = SymMatrix::from_rows(&[
            vec![3.0, 1.0, 1.0],
            vec![1.0, 3.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ])
        .unwrap();
        assert!(inverse_dense(&h).unwrap().inf_norm() < inverse_dense(&j).unwrap().inf_norm());
    }

    #[test]
    fn inverse_dense_singular_carries_pivot() {
        let m = SymMatrix::from_fn(3, |_, _| 1.0);
        match inverse_dense(&m) {
            Err(Error::Singular { pivot, .. }) => assert!(pivot < 1e-12),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn inf_norm_examples() {
        assert_eq!(inf_norm(&SymMatrix::identity(7)), 1.0);
        let inv = inverse_dense(&balanced_s4()).unwrap();
        assert!((inf_norm(&inv) - 2.0 / 3.0).abs() < 1e-14);
        let s = SymMatrix::from_fn(4, |i, j| if i == j { 4.0 } else { 1.0 });
        let inv = inverse_dense(&s).unwrap();
        assert!((inf_norm(&inv) - 3.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_sym_examples() {
        let s5 = SymMatrix::from_fn(5, |i, j| if i == j { 4.0 } else { 1.0 });
        let ev = eigen_sym(&s5).unwrap();
        for (got, want) in ev.iter().zip([3.0, 3.0, 3.0, 3.0, 8.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let ev = eigen_sym(&SymMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(ev, vec![1.0, 2.0, 3.0]);
        let j = SymMatrix::from_fn(4, |i, j| if i == j { 6.0 } else { 1.0 });
        let ev = eigen_sym(&j).unwrap();
        for (got, want) in ev.iter().zip([5.0, 5.0, 5.0, 9.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn smw_update_examples() {
        let k = inverse_dense(&example_j()).unwrap();
        let same = smw_update(&k, &[1.0, 0.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(same, k);

        let i3 = SymMatrix::identity(3);
        let upd = smw_update(&i3, &[1.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(upd, SymMatrix::diagonal(&[0.5, 1.0, 1.0]));

        let u = [0.0, 1.0, 0.0, 1.0];
        let t = 0.3;
        let j = example_j();
        let shifted = SymMatrix::from_fn(4, |a, b| j.get(a, b) + t * u[a] * u[b]);
        let oracle = inverse_dense(&shifted).unwrap();
        assert!(smw_update(&k, &u, t).unwrap().max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn smw_update_detects_singular_denominator() {
        let k = SymMatrix::identity(2);
        assert!(matches!(
            smw_update(&k, &[1.0, 0.0], -1.0),
            Err(Error::SingularUpdate { .. })
        ));
    }

    #[test]
    fn loewner_examples() {
        let s = balanced_s4();
        assert!(loewner_geq(&s, &s, 1e-12).unwrap());
        assert!(loewner_geq(&example_j(), &s, 1e-12).unwrap());
        assert!(!loewner_geq(&s, &s.scaled(3.0), 1e-12).unwrap());
    }

    #[test]
    fn asymmetric_rows_rejected() {
        let err = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { i: 0, j: 1, .. }));
    }
}
