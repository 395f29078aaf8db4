//! Every inequality as a checkable certificate.
//!
//! Each check returns a [`BoundReport`] asserting `lhs <= rhs` up to
//! `tol = 1e-9 * max(1, |rhs|)`. A check whose hypotheses fail on the given
//! input returns an *inapplicable* report (`applicable == false`,
//! `holds == false`) rather than passing silently.

mod conjecture;
mod det;
mod inverse;
mod xi;

pub use conjecture::{
    conjecture_search, det_upper_check, lower_norm_check, ConjectureLedger, ConjectureMode,
    ConjectureRecord,
};
pub use det::{
    adjugate_bound, block_det_ratio, det_lower_base, det_lower_bound, det_upper_bound_balanced,
    lu_det_ratio, BlockDetRatio,
};
pub use inverse::{
    condition_bound, eig_interval_check, lower_bound_trivial, main_bound, spectral_route_bound,
    varah_bound,
};
pub use xi::{xi_closed_form, xi_functional, XiResult};

use crate::matcore::{classify, default_tol, DominanceReport, SymMatrix};

pub fn comparison_tol(rhs: f64) -> f64 {
    1e-9 * rhs.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
    pub applicable: bool,
    /// The bound carries no information on this input (still reported).
    pub vacuous: bool,
    /// Parameter record; always includes `tol`.
    pub context: Vec<(&'static str, f64)>,
    pub note: Option<String>,
}

impl BoundReport {
    pub fn compare(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let tol = comparison_tol(rhs);
        Self {
            name,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: lhs <= rhs + tol,
            applicable: true,
            vacuous: false,
            context: vec![("tol", tol)],
            note: None,
        }
    }

    pub fn inapplicable(name: &'static str, reason: impl Into<String>) -> Self {
        Self {
            name,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            holds: false,
            applicable: false,
            vacuous: false,
            context: Vec::new(),
            note: Some(reason.into()),
        }
    }

    pub fn with(mut self, key: &'static str, value: f64) -> Self {
        self.context.push((key, value));
        self
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.context.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }

    pub fn tol(&self) -> f64 {
        self.param("tol").unwrap_or(0.0)
    }

    /// `key=value;...` rendering of the context, for CSV output.
    pub fn params_string(&self) -> String {
        self.context
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Dominance diagnostics at the default tolerance.
pub(crate) fn dominance(j: &SymMatrix) -> DominanceReport {
    classify(j, default_tol(j))
}

/// Reason the off-diagonal entries escape `[ell, m]`, if they do.
pub(crate) fn offdiag_outside(j: &SymMatrix, ell: f64, m: Option<f64>) -> Option<String> {
    let n = j.n();
    let slack = 1e-12 * j.inf_norm().max(1.0);
    for a in 0..n {
        for b in (a + 1)..n {
            let v = j.get(a, b);
            if v < ell - slack {
                return Some(format!("J[{a}][{b}] = {v} < ell = {ell}"));
            }
            if let Some(m) = m {
                if v > m + slack {
                    return Some(format!("J[{a}][{b}] = {v} > m = {m}"));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_records_tolerance() {
        let r = BoundReport::compare("x", 1.0, 2.0);
        assert!(r.holds && r.applicable && !r.vacuous);
        assert_eq!(r.slack, 1.0);
        assert_eq!(r.tol(), 2e-9);
        let r = BoundReport::compare("x", 1.0 + 5e-10, 1.0);
        assert!(r.holds);
        let r = BoundReport::compare("x", 1.0 + 5e-9, 1.0);
        assert!(!r.holds);
    }

    #[test]
    fn inapplicable_never_holds() {
        let r = BoundReport::inapplicable("x", "because");
        assert!(!r.holds && !r.applicable);
    }
}
