use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}")]
    Asymmetric { i: usize, j: usize, gap: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is singular to working precision (pivot {pivot:e} at step {step})")]
    Singular { pivot: f64, step: usize },

    #[error("computed inverse is not symmetric (relative asymmetry {gap:e})")]
    AsymmetricInverse { gap: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at step {step})")]
    NotPositiveDefinite { pivot: f64, step: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("rank-one update is singular: 1 + t*u'Ku = {denom:e}")]
    SingularUpdate { denom: f64 },

    #[error("trailing block starting at row {index} is singular")]
    SingularBlock { index: usize },

    #[error("invalid S-form: {0}")]
    InvalidSForm(String),

    #[error("S-form is not diagonally dominant: alpha = {alpha} < (n-2)*ell = {required}")]
    SFormNotDominant { alpha: f64, required: f64 },

    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("pairwise sum at ({i}, {j}) is {sum:e}, below the domain floor {floor:e}")]
    Domain {
        i: usize,
        j: usize,
        sum: f64,
        floor: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
