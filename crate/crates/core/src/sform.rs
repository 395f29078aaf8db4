//! The reference family `S(alpha, ell) = alpha * I + ell * 1 1^T`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcore::SymMatrix;

/// `alpha * I_n + ell * ones`, with `n >= 3` and `alpha, ell > 0`.
///
/// Every row has dominance `alpha - (n - 2) * ell`, so the matrix is
/// diagonally dominant exactly when `alpha >= (n - 2) * ell` and balanced
/// when equality holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SForm {
    n: usize,
    alpha: f64,
    ell: f64,
}

impl SForm {
    pub fn new(n: usize, alpha: f64, ell: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSForm(format!("n = {n}, need n >= 3")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidSForm(format!("alpha = {alpha}, need alpha > 0")));
        }
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidSForm(format!("ell = {ell}, need ell > 0")));
        }
        Ok(Self { n, alpha, ell })
    }

    /// The balanced member, `alpha = (n - 2) * ell`.
    pub fn balanced(n: usize, ell: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSForm(format!("n = {n}, need n >= 3")));
        }
        Self::new(n, (n - 2) as f64 * ell, ell)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Common row dominance `alpha - (n - 2) * ell`.
    pub fn delta(&self) -> f64 {
        self.alpha - (self.n - 2) as f64 * self.ell
    }

    pub fn is_dominant(&self) -> bool {
        self.delta() >= -1e-12 * self.alpha
    }

    pub fn require_dominant(&self) -> Result<()> {
        if self.is_dominant() {
            Ok(())
        } else {
            Err(Error::SFormNotDominant {
                alpha: self.alpha,
                required: (self.n - 2) as f64 * self.ell,
            })
        }
    }

    pub fn dense(&self) -> SymMatrix {
        let (d, o) = (self.alpha + self.ell, self.ell);
        SymMatrix::from_fn(self.n, |i, j| if i == j { d } else { o })
    }

    /// `(a, b)` with `S^{-1} = a I - b 1 1^T`.
    pub fn inverse_coefficients(&self) -> (f64, f64) {
        let a = 1.0 / self.alpha;
        let b = self.ell / (self.alpha * (self.alpha + self.ell * self.n as f64));
        (a, b)
    }

    pub fn inverse(&self) -> SymMatrix {
        let (a, b) = self.inverse_coefficients();
        SymMatrix::from_fn(self.n, |i, j| if i == j { a - b } else { -b })
    }

    /// `||S^{-1}||_inf = (alpha + 2 ell (n-1)) / (alpha (alpha + ell n))`.
    pub fn inf_norm_inverse(&self) -> f64 {
        let n = self.n as f64;
        (self.alpha + 2.0 * self.ell * (n - 1.0)) / (self.alpha * (self.alpha + self.ell * n))
    }

    /// `(alpha, alpha + ell n)`; the first has multiplicity `n - 1`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.alpha, self.alpha + self.ell * self.n as f64)
    }
}

impl fmt::Display for SForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.alpha, self.ell)
    }
}

/// Parses `"n,alpha,ell"`.
impl FromStr for SForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidSForm(format!(
                "expected \"n,alpha,ell\", got {s:?}"
            )));
        }
        let n = parts[0]
            .parse::<usize>()
            .map_err(|e| Error::InvalidSForm(format!("n: {e}")))?;
        let alpha = parts[1]
            .parse::<f64>()
            .map_err(|e| Error::InvalidSForm(format!("alpha: {e}")))?;
        let ell = parts[2]
            .parse::<f64>()
            .map_err(|e| Error::InvalidSForm(format!("ell: {e}")))?;
        Self::new(n, alpha, ell)
    }
}
