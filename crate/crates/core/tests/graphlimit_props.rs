use proptest::prelude::*;
use sdd_core::graphlimit::{
    analyze_bipartition, incidence, incidence_rank, limit_closed_form, limit_inf_norm,
    limit_numeric, limit_u_route, signless_laplacian, Component, LoopGraph, NUMERIC_LIMIT_T,
};
use sdd_core::SForm;

/// Edge mask over the upper triangle including the diagonal (self-loops).
fn graph() -> impl Strategy<Value = LoopGraph> {
    (3usize..=12).prop_flat_map(|n| {
        let slots = n * (n + 1) / 2;
        (
            Just(n),
            prop::collection::vec(prop::bool::weighted(0.3), slots),
            prop::collection::vec(prop::bool::weighted(0.3), slots),
        )
            .prop_map(|(n, edge, keep_loop)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i..n {
                        // self-loops are rarer than edges
                        let on = if i == j { edge[k] && keep_loop[k] } else { edge[k] };
                        if on {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                LoopGraph::new(n, edges).unwrap()
            })
    })
}

fn sform(n: usize) -> impl Strategy<Value = SForm> {
    (0.2f64..3.0, 0.0f64..2.0)
        .prop_map(move |(ell, extra)| SForm::new(n, (n - 2) as f64 * ell * (1.0 + extra), ell).unwrap())
}

fn graph_and_sform() -> impl Strategy<Value = (LoopGraph, SForm)> {
    graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), sform(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn incidence_factors_signless_laplacian(g in graph()) {
        let l = incidence(&g);
        let p = signless_laplacian(&g);
        prop_assert!(l.matmul(&l.transpose()).max_abs_diff(p.as_dense()) < 1e-12);
    }

    #[test]
    fn incidence_rank_is_n_minus_bipartite_components(g in graph()) {
        let b = analyze_bipartition(&g);
        prop_assert_eq!(incidence_rank(&g), g.n() - b.r);
    }

    #[test]
    fn three_routes_agree((g, s) in graph_and_sform()) {
        let b = analyze_bipartition(&g);
        let closed = limit_closed_form(&s, &b).unwrap();
        let u = limit_u_route(&s, &b).unwrap();
        prop_assert!(closed.max_abs_diff(&u) < 1e-9);
        let numeric = limit_numeric(&s, &g, NUMERIC_LIMIT_T).unwrap();
        prop_assert!(closed.max_abs_diff(&numeric) < 1e-5);
    }

    #[test]
    fn limit_annihilates_incidence((g, s) in graph_and_sform()) {
        let b = analyze_bipartition(&g);
        let n_mat = limit_closed_form(&s, &b).unwrap();
        let nl = n_mat.matmul(&incidence(&g));
        prop_assert!(nl.max_abs() < 1e-9);
        for &(i, j) in g.edges() {
            for r in 0..g.n() {
                if i == j {
                    prop_assert!(n_mat.get(r, i).abs() < 1e-12);
                } else {
                    prop_assert!((n_mat.get(r, i) + n_mat.get(r, j)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn limit_is_block_constant_in_magnitude((g, s) in graph_and_sform()) {
        let b = analyze_bipartition(&g);
        let n_mat = limit_closed_form(&s, &b).unwrap();
        let comps = b.components();
        for ci in comps {
            for cj in comps {
                let (vi, vj) = (ci.vertices(), cj.vertices());
                let first = n_mat.get(vi[0], vj[0]).abs();
                let zero = matches!(ci, Component::NonBipartite { .. })
                    || matches!(cj, Component::NonBipartite { .. });
                for &a in &vi {
                    for &c in &vj {
                        let v = n_mat.get(a, c).abs();
                        prop_assert!((v - first).abs() < 1e-10);
                        if zero {
                            prop_assert!(v < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn norm_formula_and_extremal_gap((g, s) in graph_and_sform()) {
        let b = analyze_bipartition(&g);
        let n_mat = limit_closed_form(&s, &b).unwrap();
        let formula = limit_inf_norm(&s, &b);
        prop_assert!((formula - n_mat.inf_norm()).abs() < 1e-10);
        if g.has_edges() {
            prop_assert!(formula < s.inf_norm_inverse());
        } else {
            prop_assert!((formula - s.inf_norm_inverse()).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_t_norm_stays_below_reference((g, s) in graph_and_sform(), log_t in -3.0f64..6.0) {
        prop_assume!(g.has_edges());
        let m = limit_numeric(&s, &g, 10f64.powf(log_t)).unwrap();
        prop_assert!(m.inf_norm() < s.inf_norm_inverse());
    }
}

#[test]
fn empty_graph_limit_is_reference_inverse() {
    let s = SForm::new(5, 4.0, 1.0).unwrap();
    let b = analyze_bipartition(&LoopGraph::empty(5));
    let n_mat = limit_closed_form(&s, &b).unwrap();
    assert!(n_mat.max_abs_diff(&s.inverse()) < 1e-15);
}
