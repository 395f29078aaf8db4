//! Signless Laplacians, bipartition structure, and the limit
//! `N = lim_{t -> inf} (S + tP)^{-1}` by three independent routes.

mod graph;
mod limit;

pub use graph::{
    analyze_bipartition, incidence, signless_laplacian, BipartitionSummary, Component,
    LoopGraph, VertexSide,
};
pub use limit::{
    incidence_rank, limit_big_y, limit_block_constants, limit_closed_form, limit_inf_norm,
    limit_numeric, limit_u_route, limit_y, u_basis, BlockConstants,
};

/// `t` used when the finite-`t` inverse stands in for the limit.
pub const NUMERIC_LIMIT_T: f64 = 1e8;
