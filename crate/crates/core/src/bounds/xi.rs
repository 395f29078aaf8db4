//! Row dominance of `Q = S^{-1} P S^{-1}`.

use crate::error::{Error, Result};
use crate::matcore::{classify, default_tol, delta, SymMatrix};
use crate::sform::SForm;

#[derive(Clone, Debug, PartialEq)]
pub struct XiResult {
    /// `min_i (Q_ii - sum_{j != i} Q_ij)`.
    pub xi: f64,
    pub per_row: Vec<f64>,
    pub closed_form: Vec<f64>,
    /// Largest `|direct - closed| / max(|direct|, |closed|)` over rows.
    pub max_rel_discrepancy: f64,
    /// `P == 0`: the result is defined as zero and carries no information.
    pub zero_p: bool,
}

/// Per-row closed form of `Q_ii - sum_{j != i} Q_ij` in terms of `Delta_i(P)`,
/// `P_ii` and the sum of `P` outside row and column `i`.
pub fn xi_closed_form(s: &SForm, p: &SymMatrix) -> Result<Vec<f64>> {
    let n = s.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: p.n() });
    }
    let (_, b) = s.inverse_coefficients();
    let r = s.alpha() / s.ell();
    let nf = n as f64;
    let total: f64 = (0..n).map(|i| p.row(i).iter().sum::<f64>()).sum();
    let dp = delta(p);
    Ok((0..n)
        .map(|i| {
            let row: f64 = p.row(i).iter().sum();
            // sum over j, k both != i
            let outside = total - 2.0 * row + p.get(i, i);
            b * b
                * (((r + nf - 2.0) * (r + 4.0) + 4.0) * dp[i]
                    + (2.0 * (r + nf - 1.0) * (nf - 3.0) + r) * p.get(i, i)
                    + (r + 2.0) * outside)
        })
        .collect())
}

/// Direct evaluation from the dense product, cross-checked against
/// [`xi_closed_form`].
pub fn xi_functional(s: &SForm, p: &SymMatrix) -> Result<XiResult> {
    s.require_dominant()?;
    let n = s.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: p.n() });
    }
    let zero_p = (0..n).all(|i| p.row(i).iter().all(|&v| v == 0.0));
    if zero_p {
        return Ok(XiResult {
            xi: 0.0,
            per_row: vec![0.0; n],
            closed_form: vec![0.0; n],
            max_rel_discrepancy: 0.0,
            zero_p,
        });
    }
    if (0..n).any(|i| p.row(i).iter().any(|&v| v < 0.0)) {
        return Err(Error::InvalidArgument("P must be entrywise nonnegative".into()));
    }
    if !classify(p, default_tol(p)).is_dominant {
        return Err(Error::InvalidArgument("P must be diagonally dominant".into()));
    }
    let inv = s.inverse();
    let q = inv.matmul(&p.matmul(inv.as_dense()));
    let per_row: Vec<f64> = (0..n)
        .map(|i| {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| q.get(i, j)).sum();
            q.get(i, i) - off
        })
        .collect();
    let closed_form = xi_closed_form(s, p)?;
    let max_rel_discrepancy = per_row
        .iter()
        .zip(&closed_form)
        .map(|(d, c)| (d - c).abs() / d.abs().max(c.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let xi = per_row.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(XiResult {
        xi,
        per_row,
        closed_form,
        max_rel_discrepancy,
        zero_p,
    })
}
