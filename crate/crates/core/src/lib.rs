//! Inverses and determinants of symmetric diagonally dominant positive
//! matrices: closed forms, graph limits, checkable bounds, and the
//! degree-sequence estimator built on them.

pub mod bounds;
pub mod error;
pub mod graphlimit;
pub mod io;
pub mod matcore;
pub mod retina;
pub mod sform;
pub mod suites;

pub use error::{Error, Result};
pub use matcore::{DenseMatrix, SymMatrix};
pub use sform::SForm;
