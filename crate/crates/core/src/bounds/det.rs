//! Determinant ratios `det(J) / prod J_ii` and their bounds.

use super::{dominance, offdiag_outside, BoundReport};
use crate::error::{Error, Result};
use crate::matcore::{inverse_dense, DenseMatrix, Lu, SymMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDetRatio {
    /// `s_i / J_ii` for `i = 1..n-1`, where `s_i` is the Schur complement of
    /// the trailing block `J_(i+1)` in `J_(i)`.
    pub factors: Vec<f64>,
    pub ratio: f64,
}

/// `det(J) / prod J_ii` as a product of trailing-block Schur factors.
///
/// Fails with [`Error::SingularBlock`] naming the 1-based index of the first
/// singular trailing block `J_(i+1)`.
pub fn block_det_ratio(j: &SymMatrix) -> Result<BlockDetRatio> {
    let n = j.n();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut factors = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let jii = j.get(i, i);
        if jii == 0.0 {
            return Err(Error::SingularBlock { index: i + 1 });
        }
        let tail = j.trailing_block(i + 1);
        let lu = Lu::factor(tail.as_dense()).map_err(|_| Error::SingularBlock { index: i + 2 })?;
        let b = &j.row(i)[i + 1..];
        let x = lu.solve(b);
        let quad: f64 = b.iter().zip(&x).map(|(p, q)| p * q).sum();
        factors.push(1.0 - quad / jii);
    }
    let ratio = factors.iter().product();
    Ok(BlockDetRatio { factors, ratio })
}

/// `det(J) / prod J_ii` from one LU of the row-scaled matrix `D^{-1} J`.
pub fn lu_det_ratio(j: &SymMatrix) -> Result<f64> {
    let n = j.n();
    let diag = j.diag();
    if let Some(i) = diag.iter().position(|&d| d == 0.0) {
        return Err(Error::SingularBlock { index: i + 1 });
    }
    let scaled = DenseMatrix::from_fn(n, n, |a, b| j.get(a, b) / diag[a]);
    Ok(Lu::factor(&scaled)?.det())
}

/// `1 - sqrt(m/ell)(1 + m/ell) / (2(n-2))`.
pub fn det_lower_base(n: usize, ell: f64, m: f64) -> f64 {
    let r = m / ell;
    1.0 - r.sqrt() * (1.0 + r) / (2.0 * (n as f64 - 2.0))
}

fn det_hypotheses(
    name: &'static str,
    j: &SymMatrix,
    ell: f64,
    m: f64,
    need_balanced: bool,
) -> Option<BoundReport> {
    if j.n() < 3 {
        return Some(BoundReport::inapplicable(name, "n < 3"));
    }
    if !(ell > 0.0 && m >= ell && m.is_finite()) {
        return Some(BoundReport::inapplicable(name, "need 0 < ell <= m"));
    }
    let dom = dominance(j);
    if need_balanced && !dom.is_balanced {
        return Some(BoundReport::inapplicable(name, "J is not balanced"));
    }
    if !dom.is_dominant {
        return Some(BoundReport::inapplicable(name, "J is not diagonally dominant"));
    }
    offdiag_outside(j, ell, Some(m)).map(|reason| BoundReport::inapplicable(name, reason))
}

/// `(1 - sqrt(m/ell)(1 + m/ell) / (2(n-2)))^{n-1} <= det(J) / prod J_ii`.
///
/// A non-positive base makes the bound vacuous: `lhs` becomes `-inf` and the
/// report is flagged.
pub fn det_lower_bound(j: &SymMatrix, ell: f64, m: f64) -> Result<BoundReport> {
    const NAME: &str = "det";
    if let Some(r) = det_hypotheses(NAME, j, ell, m, false) {
        return Ok(r);
    }
    let n = j.n();
    let base = det_lower_base(n, ell, m);
    let vacuous = base <= 0.0;
    let lhs = if vacuous {
        f64::NEG_INFINITY
    } else {
        base.powi(n as i32 - 1)
    };
    let rhs = block_det_ratio(j)?.ratio;
    let mut report = BoundReport::compare(NAME, lhs, rhs)
        .with("n", n as f64)
        .with("ell", ell)
        .with("m", m)
        .with("base", base);
    report.vacuous = vacuous;
    if vacuous {
        report.note = Some("base <= 0, bound carries no information".into());
    }
    Ok(report)
}

/// `det(J) / prod J_ii <= exp(-ell^2 / (4 m^2))` for balanced `J`.
pub fn det_upper_bound_balanced(j: &SymMatrix, ell: f64, m: f64) -> Result<BoundReport> {
    const NAME: &str = "det_upper";
    if let Some(r) = det_hypotheses(NAME, j, ell, m, true) {
        return Ok(r);
    }
    let lhs = block_det_ratio(j)?.ratio;
    let rhs = (-(ell * ell) / (4.0 * m * m)).exp();
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", j.n() as f64)
        .with("ell", ell)
        .with("m", m))
}

/// `||adj J||_inf / prod J_ii <= (3n-4) / (2 ell (n-2)(n-1)) exp(-ell^2/(4m^2))`.
///
/// The adjugate is `det(J) J^{-1}`, so the left side is the determinant
/// ratio times `||J^{-1}||_inf`.
pub fn adjugate_bound(j: &SymMatrix, ell: f64, m: f64) -> Result<BoundReport> {
    const NAME: &str = "adjugate";
    if let Some(r) = det_hypotheses(NAME, j, ell, m, true) {
        return Ok(r);
    }
    let n = j.n() as f64;
    let ratio = lu_det_ratio(j)?;
    let inv_norm = inverse_dense(j)?.inf_norm();
    let lhs = ratio.abs() * inv_norm;
    let rhs = (3.0 * n - 4.0) / (2.0 * ell * (n - 2.0) * (n - 1.0)) * (-(ell * ell) / (4.0 * m * m)).exp();
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", n)
        .with("ell", ell)
        .with("m", m)
        .with("det_ratio", ratio))
}
