//! Seeded random search for counterexamples to two open inequalities.
//!
//! A violation here is a finding, recorded in the ledger, not an error.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::det::block_det_ratio;
use super::{dominance, BoundReport};
use crate::error::{Error, Result};
use crate::matcore::{inverse_dense, SymMatrix};
use crate::sform::SForm;
use crate::suites::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureMode {
    /// `||J^{-1}||_inf >= ||S(alpha, m)^{-1}||_inf` for SDD `0 < J <= S(alpha, m)`.
    LowerNorm,
    /// `det(J) / prod J_ii <= 2 (1 - 1/(n-1))^{n-1}` for positive balanced `J`.
    DetUpper,
}

impl fmt::Display for ConjectureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::LowerNorm => "lower-norm",
            Self::DetUpper => "det-upper",
        })
    }
}

impl FromStr for ConjectureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower-norm" | "lower_norm" => Ok(Self::LowerNorm),
            "det-upper" | "det_upper" => Ok(Self::DetUpper),
            other => Err(Error::InvalidArgument(format!("unknown conjecture {other:?}"))),
        }
    }
}

/// `lhs = ||S^{-1}||_inf`, `rhs = ||J^{-1}||_inf`; holds when the
/// conjectured lower bound holds.
///
/// Applicable to any SDD `0 < J <= S(alpha, m)`. On that class alone the
/// inequality fails easily (a nearly diagonal `J` has a small inverse), so
/// the report also records `max_delta` against `delta_cap = alpha - (n-2) m`.
/// The search samples only `J` with every `Delta_i(J) <= delta_cap`.
pub fn lower_norm_check(j: &SymMatrix, s: &SForm) -> Result<BoundReport> {
    const NAME: &str = "lower_norm";
    if j.n() != s.n() {
        return Ok(BoundReport::inapplicable(NAME, "dimension mismatch"));
    }
    if !s.is_dominant() {
        return Ok(BoundReport::inapplicable(NAME, "S is not diagonally dominant"));
    }
    if !dominance(j).is_dominant {
        return Ok(BoundReport::inapplicable(NAME, "J is not diagonally dominant"));
    }
    let cap = s.dense();
    let slack = 1e-12 * cap.inf_norm();
    for a in 0..j.n() {
        for b in a..j.n() {
            let v = j.get(a, b);
            if !(v > 0.0) || v > cap.get(a, b) + slack {
                return Ok(BoundReport::inapplicable(
                    NAME,
                    format!("J[{a}][{b}] = {v} outside (0, S[{a}][{b}]]"),
                ));
            }
        }
    }
    let lhs = s.inf_norm_inverse();
    let rhs = inverse_dense(j)?.inf_norm();
    let max_delta = dominance(j).max_delta;
    Ok(BoundReport::compare(NAME, lhs, rhs)
        .with("n", s.n() as f64)
        .with("alpha", s.alpha())
        .with("m", s.ell())
        .with("max_delta", max_delta)
        .with("delta_cap", s.delta()))
}

/// `det(J) / prod J_ii <= 2 (1 - 1/(n-1))^{n-1}` for positive balanced `J`.
pub fn det_upper_check(j: &SymMatrix) -> Result<BoundReport> {
    const NAME: &str = "det_upper_conj";
    let n = j.n();
    if n < 3 {
        return Ok(BoundReport::inapplicable(NAME, "n < 3"));
    }
    let dom = dominance(j);
    if !dom.is_balanced {
        return Ok(BoundReport::inapplicable(NAME, "J is not balanced"));
    }
    if dom.min_offdiag().is_none_or(|v| v <= 0.0) {
        return Ok(BoundReport::inapplicable(NAME, "off-diagonal entries not positive"));
    }
    let nf = n as f64;
    let lhs = block_det_ratio(j)?.ratio;
    let rhs = 2.0 * (1.0 - 1.0 / (nf - 1.0)).powi(n as i32 - 1);
    Ok(BoundReport::compare(NAME, lhs, rhs).with("n", nf))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRecord {
    pub trial: u64,
    pub n: usize,
    pub report: BoundReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureLedger {
    pub mode: ConjectureMode,
    pub seed: u64,
    pub records: Vec<ConjectureRecord>,
    pub min_slack: f64,
    /// Trials whose report does not hold.
    pub violations: Vec<u64>,
}

fn lower_norm_instance<R: Rng>(rng: &mut R, n: usize) -> (SymMatrix, SForm) {
    let m: f64 = rng.random_range(0.5..3.0);
    let extra = if rng.random_bool(0.3) {
        0.0
    } else {
        rng.random_range(0.0..2.0) * m
    };
    let alpha = (n - 2) as f64 * m + extra;
    let s = SForm::new(n, alpha, m).expect("valid parameters");
    let mut off = SymMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            rng.random_range(0.05..=1.0) * m
        }
    });
    // dominances stay below delta = alpha - (n-2) m, which keeps J <= S(alpha, m)
    let diag: Vec<f64> = (0..n)
        .map(|i| off.row(i).iter().sum::<f64>() + rng.random_range(0.0..=1.0) * extra)
        .collect();
    off = off.add_scaled(&SymMatrix::diagonal(&diag), 1.0);
    (off, s)
}

fn balanced_instance<R: Rng>(rng: &mut R, n: usize) -> SymMatrix {
    let ell: f64 = rng.random_range(0.1..2.0);
    let m = ell * rng.random_range(1.0..5.0);
    let off = SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { rng.random_range(ell..=m) });
    let diag: Vec<f64> = (0..n).map(|i| off.row(i).iter().sum()).collect();
    off.add_scaled(&SymMatrix::diagonal(&diag), 1.0)
}

/// Deterministic in `(seed, trial)`; parallel over trials.
pub fn conjecture_search(
    mode: ConjectureMode,
    trials: u64,
    seed: u64,
    n_range: (usize, usize),
) -> Result<ConjectureLedger> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let (lo, hi) = n_range;
    if lo < 3 || hi < lo {
        return Err(Error::InvalidArgument(format!("n range {lo},{hi} needs 3 <= a <= b")));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = rng.random_range(lo..=hi);
            let report = match mode {
                ConjectureMode::LowerNorm => {
                    let (j, s) = lower_norm_instance(&mut rng, n);
                    lower_norm_check(&j, &s)?
                }
                ConjectureMode::DetUpper => det_upper_check(&balanced_instance(&mut rng, n))?,
            };
            Ok(ConjectureRecord { trial, n, report })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_slack = records
        .iter()
        .map(|r| r.report.slack)
        .fold(f64::INFINITY, f64::min);
    let violations = records
        .iter()
        .filter(|r| !r.report.holds)
        .map(|r| r.trial)
        .collect();
    Ok(ConjectureLedger {
        mode,
        seed,
        records,
        min_slack,
        violations,
    })
}
