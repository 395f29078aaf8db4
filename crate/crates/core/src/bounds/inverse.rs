//! Infinity-norm bounds on `J^{-1}` and the eigenvalue intervals behind them.

use super::{dominance, offdiag_outside, BoundReport};
use crate::error::Result;
use crate::matcore::{eigen_sym, inverse_dense, SymMatrix};
use crate::sform::SForm;

/// Varah: `||J^{-1}||_inf <= max_i 1 / Delta_i` for strictly dominant `J`.
pub fn varah_bound(j: &SymMatrix) -> Result<BoundReport> {
    const NAME: &str = "varah";
    let dom = dominance(j);
    if !dom.is_strictly_dominant {
        return Ok(BoundReport::inapplicable(
            NAME,
            "not strictly diagonally dominant (some Delta_i = 0)",
        ));
    }
    let lhs = inverse_dense(j)?.inf_norm();
    let rhs = dom
        .deltas
        .iter()
        .map(|d| 1.0 / d)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_delta = dom.deltas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", j.n() as f64)
        .with("min_delta", min_delta))
}

/// `||J^{-1}||_inf <= ||S^{-1}||_inf` for SDD `J >= S`, `S` dominant.
///
/// `J >= S` means `J - S` is entrywise nonnegative and every row dominance
/// of `J` is at least that of `S`, i.e. `J - S` is itself diagonally
/// dominant. For balanced `S` the second condition is just dominance of `J`;
/// for strictly dominant `S` it cannot be dropped.
pub fn main_bound(j: &SymMatrix, s: &SForm) -> Result<BoundReport> {
    const NAME: &str = "main";
    if j.n() != s.n() {
        return Ok(BoundReport::inapplicable(NAME, "dimension mismatch"));
    }
    if !s.is_dominant() {
        return Ok(BoundReport::inapplicable(NAME, "S is not diagonally dominant"));
    }
    if !dominance(j).is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    let reference = s.dense();
    let slack = 1e-12 * j.inf_norm().max(1.0);
    for a in 0..j.n() {
        for b in a..j.n() {
            if j.get(a, b) < reference.get(a, b) - slack {
                return Ok(BoundReport::inapplicable(
                    NAME,
                    format!("J[{a}][{b}] = {} < S[{a}][{b}]", j.get(a, b)),
                ));
            }
        }
    }
    let s_delta = s.delta();
    if let Some((i, d)) = dominance(j)
        .deltas
        .iter()
        .enumerate()
        .find(|&(_, &d)| d < s_delta - slack)
    {
        return Ok(BoundReport::inapplicable(
            NAME,
            format!("Delta_{i}(J) = {d} < Delta(S) = {s_delta}"),
        ));
    }
    let lhs = inverse_dense(j)?.inf_norm();
    let rhs = s.inf_norm_inverse();
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", s.n() as f64)
        .with("alpha", s.alpha())
        .with("ell", s.ell()))
}

/// `1 / (2 m (n-1) + delta) <= ||J^{-1}||_inf`.
pub fn lower_bound_trivial(j: &SymMatrix) -> Result<BoundReport> {
    const NAME: &str = "lower";
    let dom = dominance(j);
    let Some(off) = dom.off_diagonal else {
        return Ok(BoundReport::inapplicable(NAME, "no off-diagonal entries"));
    };
    if !dom.is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    if off.min <= 0.0 {
        return Ok(BoundReport::inapplicable(NAME, "off-diagonal entries not positive"));
    }
    let n = j.n() as f64;
    let delta = dom.max_delta.max(0.0);
    let lhs = 1.0 / (2.0 * off.max * (n - 1.0) + delta);
    let rhs = inverse_dense(j)?.inf_norm();
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", n)
        .with("m", off.max)
        .with("delta", delta))
}

/// `||J^{-1}||_inf <= sqrt(n) ||J^{-1}||_2 <= sqrt(n) / ((n-2) ell)`.
///
/// The intermediate `sqrt(n) / lambda_min` is recorded as `spectral_middle`.
pub fn spectral_route_bound(j: &SymMatrix, ell: f64) -> Result<BoundReport> {
    const NAME: &str = "spectral";
    if j.n() < 3 {
        return Ok(BoundReport::inapplicable(NAME, "n < 3"));
    }
    if !(ell > 0.0) {
        return Ok(BoundReport::inapplicable(NAME, "ell must be positive"));
    }
    if !dominance(j).is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    if let Some(reason) = offdiag_outside(j, ell, None) {
        return Ok(BoundReport::inapplicable(NAME, reason));
    }
    let n = j.n() as f64;
    let lambda_min = eigen_sym(j)?[0];
    let lhs = inverse_dense(j)?.inf_norm();
    let rhs = n.sqrt() / ((n - 2.0) * ell);
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", n)
        .with("ell", ell)
        .with("lambda_min", lambda_min)
        .with("spectral_middle", n.sqrt() / lambda_min))
}

/// `kappa_inf(J) <= (2 m (n-1) + delta)(3n - 4) / (2 ell (n-2)(n-1))`.
pub fn condition_bound(j: &SymMatrix, ell: f64) -> Result<BoundReport> {
    const NAME: &str = "cond";
    if j.n() < 3 {
        return Ok(BoundReport::inapplicable(NAME, "n < 3"));
    }
    if !(ell > 0.0) {
        return Ok(BoundReport::inapplicable(NAME, "ell must be positive"));
    }
    let dom = dominance(j);
    if !dom.is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    if let Some(reason) = offdiag_outside(j, ell, None) {
        return Ok(BoundReport::inapplicable(NAME, reason));
    }
    let n = j.n() as f64;
    let m = dom.max_offdiag().unwrap_or(ell);
    let delta = dom.max_delta.max(0.0);
    let lhs = j.inf_norm() * inverse_dense(j)?.inf_norm();
    let rhs = (2.0 * m * (n - 1.0) + delta) * (3.0 * n - 4.0) / (2.0 * ell * (n - 2.0) * (n - 1.0));
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", n)
        .with("ell", ell)
        .with("m", m)
        .with("delta", delta))
}

/// Eigenvalue intervals of the trailing block `J_(i)` (1-based `i`).
///
/// For a block of size `k = n - i + 1`, the `k - 1` smallest eigenvalues lie
/// in `[(n-2) ell, (n-2) m]` and the largest in `[(2n-i-1) ell, (2n-i-1) m]`.
/// Upper ends are asserted only for balanced `J`. The report carries the
/// worst relative violation as `lhs` against `rhs = 0`.
pub fn eig_interval_check(j: &SymMatrix, ell: f64, m: f64, i: usize) -> Result<BoundReport> {
    const NAME: &str = "eig";
    let n = j.n();
    if n < 3 {
        return Ok(BoundReport::inapplicable(NAME, "n < 3"));
    }
    if i == 0 || i >= n {
        return Ok(BoundReport::inapplicable(NAME, format!("block index {i} outside 1..{n}")));
    }
    if !(ell > 0.0 && m >= ell) {
        return Ok(BoundReport::inapplicable(NAME, "need 0 < ell <= m"));
    }
    let dom = dominance(j);
    if !dom.is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    if let Some(reason) = offdiag_outside(j, ell, Some(m)) {
        return Ok(BoundReport::inapplicable(NAME, reason));
    }
    let upper = dom.is_balanced;
    let block = j.trailing_block(i - 1);
    let ev = eigen_sym(&block)?;
    let k = ev.len();
    let nf = n as f64;
    let bulk = nf - 2.0;
    let top = (2 * n - i - 1) as f64;

    let mut worst = f64::NEG_INFINITY;
    let mut check = |value: f64, lo: f64, hi: f64| {
        worst = worst.max((lo - value) / lo.abs().max(1.0));
        if upper {
            worst = worst.max((value - hi) / hi.abs().max(1.0));
        }
    };
    for &v in &ev[..k - 1] {
        check(v, bulk * ell, bulk * m);
    }
    check(ev[k - 1], top * ell, top * m);

    let mut report = BoundReport::compare(NAME, worst, 0.0)
        .with("n", nf)
        .with("i", i as f64)
        .with("ell", ell)
        .with("m", m)
        .with("lambda_min", ev[0])
        .with("lambda_max", ev[k - 1])
        .with("upper_checked", if upper { 1.0 } else { 0.0 });
    if k == 1 {
        report.note = Some("1x1 block".into());
    }
    Ok(report)
}
