//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use super::dense::DenseMatrix;
use super::sym::SymMatrix;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Per-pair residual budget relative to `||M||_inf`.
pub const RESIDUAL_REL_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl SymEigen {
    /// Largest `||M v - lambda v||_2` over all pairs.
    pub fn max_residual(&self, m: &SymMatrix) -> f64 {
        let n = m.n();
        (0..n)
            .map(|k| {
                let v = self.vectors.column(k);
                let mv = m.matvec(&v);
                mv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - self.values[k] * b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

pub fn sym_eigen(m: &SymMatrix) -> Result<SymEigen> {
    let n = m.n();
    let mut a = m.as_dense().clone();
    let mut v = DenseMatrix::identity(n);
    let frob = m.as_dense().as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();

    let off = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a.get(i, j) * a.get(i, j);
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off(&a) > f64::EPSILON * frob {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    let eig = SymEigen { values, vectors };

    let residual = eig.max_residual(m);
    if residual > RESIDUAL_REL_TOL * m.inf_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence {
            sweeps,
            residual,
        });
    }
    Ok(eig)
}
