//! Routes to `N = lim_{t -> inf} (S + tP)^{-1}` and its infinity norm.

use super::graph::{incidence, signless_laplacian, BipartitionSummary, LoopGraph, VertexSide};
use crate::error::{Error, Result};
use crate::matcore::{inverse_dense, Cholesky, DenseMatrix, SymMatrix};
use crate::sform::SForm;

fn check_inputs(s: &SForm, b: &BipartitionSummary) -> Result<()> {
    s.require_dominant()?;
    if s.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: s.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// Signed weights: `+1` on the p side, `-1` on the q side, `0` off bipartite parts.
fn sign_of(side: VertexSide) -> (Option<usize>, f64) {
    match side {
        VertexSide::P(k) => (Some(k), 1.0),
        VertexSide::Q(k) => (Some(k), -1.0),
        VertexSide::Odd => (None, 0.0),
    }
}

/// The `y` vector of the closed form, in original vertex order.
pub fn limit_y(b: &BipartitionSummary) -> Vec<f64> {
    let sizes = b.bipartite_sizes();
    (0..b.n())
        .map(|v| match sign_of(b.side(v)) {
            (Some(k), sign) => {
                let (p, q) = sizes[k];
                sign * (p as f64 - q as f64) / (p + q) as f64
            }
            (None, _) => 0.0,
        })
        .collect()
}

/// The block matrix `Y` of the closed form, in original vertex order.
pub fn limit_big_y(b: &BipartitionSummary) -> SymMatrix {
    let sizes = b.bipartite_sizes();
    SymMatrix::from_fn(b.n(), |u, v| match (sign_of(b.side(u)), sign_of(b.side(v))) {
        ((Some(ku), su), (Some(kv), sv)) if ku == kv => {
            let (p, q) = sizes[ku];
            su * sv / (p + q) as f64
        }
        _ => 0.0,
    })
}

/// `N = Y / alpha - ell / (alpha (alpha + ell gamma)) y y^T`.
pub fn limit_closed_form(s: &SForm, b: &BipartitionSummary) -> Result<SymMatrix> {
    check_inputs(s, b)?;
    let (alpha, ell) = (s.alpha(), s.ell());
    let y = limit_y(b);
    let big_y = limit_big_y(b);
    let c = ell / (alpha * (alpha + ell * b.gamma));
    Ok(SymMatrix::from_fn(b.n(), |u, v| {
        big_y.get(u, v) / alpha - c * y[u] * y[v]
    }))
}

/// Block constants `c_ij` over the bipartite components.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockConstants {
    /// No bipartite component: the limit is the zero matrix.
    ZeroLimit,
    Blocks(DenseMatrix),
}

impl BlockConstants {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        match self {
            BlockConstants::ZeroLimit => None,
            BlockConstants::Blocks(c) => Some(c.get(i, j)),
        }
    }
}

pub fn limit_block_constants(s: &SForm, b: &BipartitionSummary) -> Result<BlockConstants> {
    check_inputs(s, b)?;
    if b.r == 0 {
        return Ok(BlockConstants::ZeroLimit);
    }
    let (alpha, ell, gamma) = (s.alpha(), s.ell(), b.gamma);
    let scale = ell / (alpha * (alpha + ell * gamma));
    let sizes = b.bipartite_sizes();
    let ratio = |k: usize| {
        let (p, q) = sizes[k];
        (p as f64 - q as f64) / (p + q) as f64
    };
    let c = DenseMatrix::from_fn(b.r, b.r, |i, j| {
        if i == j {
            let (p, q) = sizes[i];
            let pq = (p + q) as f64;
            let diff = p as f64 - q as f64;
            scale / pq * (alpha / ell + gamma - diff * diff / pq)
        } else {
            -scale * ratio(i) * ratio(j)
        }
    });
    Ok(BlockConstants::Blocks(c))
}

/// The `n x (n - r)` basis `U` with `L = U B`, columns in original vertex order.
///
/// For each bipartite component the anchor is its lowest vertex and every
/// other vertex `i` contributes `e_anchor + sigma_i e_i` (`sigma_i = -1` on the
/// anchor's side); non-bipartite components contribute identity columns.
pub fn u_basis(b: &BipartitionSummary) -> DenseMatrix {
    let n = b.n();
    let mut columns: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n - b.r);
    for comp in b.components() {
        let vertices = comp.vertices();
        if comp.is_bipartite() {
            let anchor = comp.lowest_vertex();
            let anchor_side = b.side(anchor);
            for &v in vertices.iter().filter(|&&v| v != anchor) {
                let sigma = if b.side(v) == anchor_side { -1.0 } else { 1.0 };
                columns.push(vec![(anchor, 1.0), (v, sigma)]);
            }
        } else {
            for &v in &vertices {
                columns.push(vec![(v, 1.0)]);
            }
        }
    }
    let mut u = DenseMatrix::zeros(n, columns.len());
    for (c, entries) in columns.iter().enumerate() {
        for &(row, val) in entries {
            u.set(row, c, val);
        }
    }
    u
}

/// `N = S^{-1} - S^{-1} U (U^T S^{-1} U)^{-1} U^T S^{-1}`, evaluated densely.
pub fn limit_u_route(s: &SForm, b: &BipartitionSummary) -> Result<SymMatrix> {
    check_inputs(s, b)?;
    let s_inv = s.inverse();
    let u = u_basis(b);
    if u.cols() == 0 {
        return Ok(s_inv);
    }
    let s_inv_u = s_inv.matmul(&u);
    let gram = SymMatrix::from_dense(u.transpose().matmul(&s_inv_u), 1e-12)
        .map_err(|e| Error::Internal(format!("U^T S^-1 U not symmetric: {e}")))?;
    let chol = Cholesky::factor(&gram)
        .map_err(|e| Error::Internal(format!("U^T S^-1 U not positive definite: {e}")))?;
    // (U^T S^-1 U)^{-1} U^T S^-1
    let right = chol.solve_matrix(&s_inv_u.transpose());
    let correction = s_inv_u.matmul(&right);
    // symmetric up to roundoff; the result may cancel to ~0, so no relative check
    Ok(SymMatrix::symmetrized(
        &s_inv.as_dense().add_scaled(&correction, -1.0),
    ))
}

/// The finite-`t` matrix `(S + tP)^{-1}`.
pub fn limit_numeric(s: &SForm, g: &LoopGraph, t: f64) -> Result<SymMatrix> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("t = {t}, need t > 0")));
    }
    if s.n() != g.n() {
        return Err(Error::DimensionMismatch {
            left: s.n(),
            right: g.n(),
        });
    }
    let j = s.dense().add_scaled(&signless_laplacian(g), t);
    inverse_dense(&j)
}

/// Closed-form `||N||_inf`; zero when no component is bipartite.
pub fn limit_inf_norm(s: &SForm, b: &BipartitionSummary) -> f64 {
    if b.r == 0 {
        return 0.0;
    }
    let (alpha, ell) = (s.alpha(), s.ell());
    let best = b
        .bipartite_sizes()
        .iter()
        .map(|&(p, q)| {
            let diff = (p - q) as f64;
            diff * (b.d - 2.0 * diff) / (p + q) as f64
        })
        .fold(f64::NEG_INFINITY, f64::max);
    1.0 / alpha + ell / (alpha * (alpha + ell * b.gamma)) * best
}

/// Singular values of a dense matrix by one-sided Jacobi on its columns.
fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    // orthogonalize the columns of a^T when that is the narrower side
    let mut w = if a.rows() < a.cols() { a.transpose() } else { a.clone() };
    let (m, k) = (w.rows(), w.cols());
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    alpha += w.get(i, p) * w.get(i, p);
                    beta += w.get(i, q) * w.get(i, q);
                    gamma += w.get(i, p) * w.get(i, q);
                }
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.set(i, p, c * wp - s * wq);
                    w.set(i, q, s * wp + c * wq);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..k)
        .map(|j| (0..m).map(|i| w.get(i, j).powi(2)).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numeric rank of the incidence matrix, summed over connected components.
///
/// Each component's rank is taken at `1e-8 * sigma_max` of its own block.
pub fn incidence_rank(g: &LoopGraph) -> usize {
    g.components()
        .iter()
        .map(|comp| {
            let sub = g.induced(comp);
            if !sub.has_edges() {
                return 0;
            }
            let sv = singular_values(&incidence(&sub));
            let cutoff = 1e-8 * sv[0];
            sv.iter().filter(|&&x| x > cutoff).count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::graph::analyze_bipartition;
    use super::*;

    fn s(n: usize, alpha: f64, ell: f64) -> SForm {
        SForm::new(n, alpha, ell).unwrap()
    }

    #[test]
    fn even_cycle_closed_form() {
        let b = analyze_bipartition(&LoopGraph::cycle(4));
        let n = limit_closed_form(&s(4, 2.0, 1.0), &b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((n.get(i, j) - sign / 8.0).abs() < 1e-15);
            }
        }
        assert!((limit_inf_norm(&s(4, 2.0, 1.0), &b) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn star_closed_form_sign_pattern() {
        let b = analyze_bipartition(&LoopGraph::star(4));
        let n = limit_closed_form(&s(4, 2.0, 1.0), &b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0) != (j == 0) { -1.0 / 12.0 } else { 1.0 / 12.0 };
                assert!((n.get(i, j) - want).abs() < 1e-15, "({i},{j})");
            }
        }
        assert!((limit_inf_norm(&s(4, 2.0, 1.0), &b) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn non_bipartite_limit_is_zero() {
        let g = LoopGraph::cycle(5);
        let b = analyze_bipartition(&g);
        let form = s(5, 3.0, 1.0);
        assert_eq!(limit_closed_form(&form, &b).unwrap(), SymMatrix::zeros(5));
        assert!(limit_u_route(&form, &b).unwrap().max_abs_diff(&SymMatrix::zeros(5)) < 1e-10);
        assert_eq!(limit_inf_norm(&form, &b), 0.0);
        assert_eq!(limit_block_constants(&form, &b).unwrap(), BlockConstants::ZeroLimit);
    }

    #[test]
    fn block_constants_examples() {
        let b = analyze_bipartition(&LoopGraph::star(4));
        let c = limit_block_constants(&s(4, 2.0, 1.0), &b).unwrap();
        assert!((c.get(0, 0).unwrap() - 1.0 / 12.0).abs() < 1e-15);

        // two (2,2) components: cross constants vanish
        let g = LoopGraph::new(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]).unwrap();
        let b = analyze_bipartition(&g);
        let c = limit_block_constants(&s(8, 6.0, 1.0), &b).unwrap();
        assert_eq!(c.get(0, 1), Some(0.0));

        let b = analyze_bipartition(&LoopGraph::cycle(4));
        for alpha in [2.0, 3.5, 10.0] {
            let c = limit_block_constants(&s(4, alpha, 1.0), &b).unwrap();
            assert!((c.get(0, 0).unwrap() - 1.0 / (4.0 * alpha)).abs() < 1e-15);
        }
    }

    #[test]
    fn u_route_matches_closed_form_examples() {
        for (g, form) in [
            (LoopGraph::cycle(4), s(4, 2.0, 1.0)),
            (LoopGraph::star(6), s(6, 4.0, 1.0)),
        ] {
            let b = analyze_bipartition(&g);
            let a = limit_closed_form(&form, &b).unwrap();
            let u = limit_u_route(&form, &b).unwrap();
            assert!(a.max_abs_diff(&u) < 1e-10);
        }
    }

    #[test]
    fn numeric_limit_at_t_one_matches_displayed_inverse() {
        let form = s(4, 2.0, 1.0);
        let m = limit_numeric(&form, &LoopGraph::cycle(4), 1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i as i32 - j as i32).abs() {
                    0 => 11.0 / 40.0,
                    2 => 1.0 / 40.0,
                    _ => -1.0 / 10.0,
                };
                assert!((m.get(i, j) - want).abs() < 1e-14);
            }
        }

        let g = LoopGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let m = limit_numeric(&form, &g, 1.0).unwrap();
        let want = SymMatrix::from_rows(&[
            vec![7.0, -2.0, -1.0, -2.0],
            vec![-2.0, 8.0, -2.0, 0.0],
            vec![-1.0, -2.0, 7.0, -2.0],
            vec![-2.0, 0.0, -2.0, 8.0],
        ])
        .unwrap()
        .scaled(1.0 / 32.0);
        assert!(m.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn numeric_limit_rejects_nonpositive_t() {
        assert!(limit_numeric(&s(4, 2.0, 1.0), &LoopGraph::cycle(4), 0.0).is_err());
    }

    #[test]
    fn closed_form_requires_dominant_sform() {
        let b = analyze_bipartition(&LoopGraph::cycle(4));
        assert!(matches!(
            limit_closed_form(&s(4, 1.0, 1.0), &b),
            Err(Error::SFormNotDominant { .. })
        ));
    }

    #[test]
    fn incidence_rank_examples() {
        assert_eq!(incidence_rank(&LoopGraph::new(2, [(0, 1)]).unwrap()), 1);
        assert_eq!(incidence_rank(&LoopGraph::cycle(5)), 5);
        assert_eq!(incidence_rank(&LoopGraph::cycle(4)), 3);
        assert_eq!(incidence_rank(&LoopGraph::empty(3)), 0);
    }
}
