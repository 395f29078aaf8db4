use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::matcore::{DenseMatrix, SymMatrix};

/// Undirected graph on vertices `0..n`, self-loops allowed, no multi-edges.
///
/// Edges are stored as `(i, j)` with `i <= j`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl LoopGraph {
    /// Builds from 0-based endpoints; duplicates and orientation are normalized.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    /// Builds from 1-based endpoints as used in edge-list files.
    pub fn from_one_based(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let shifted: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| {
                if a == 0 || b == 0 || a > n || b > n {
                    Err(Error::VertexOutOfRange {
                        vertex: if a == 0 || a > n { a } else { b },
                        n,
                    })
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(n, shifted)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    /// Cycle `{1,2}, {2,3}, ..., {n-1,n}, {1,n}`.
    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("in range")
    }

    /// Star with centre `0` and edges `{0, i}`.
    pub fn star(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (0, i))).expect("in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edges(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.edges.binary_search(&(v, v)).is_ok()
    }

    /// Neighbour lists excluding self-loops.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// Connected components, each sorted, ordered by lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()`.
    pub fn induced(&self, vertices: &[usize]) -> LoopGraph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| index[*a] != usize::MAX && index[*b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]));
        LoopGraph::new(vertices.len(), edges).expect("relabelled edges in range")
    }
}

/// `P = D + A`; a self-loop adds 2 to its diagonal entry.
pub fn signless_laplacian(g: &LoopGraph) -> SymMatrix {
    let n = g.n();
    let mut p = DenseMatrix::zeros(n, n);
    for &(a, b) in g.edges() {
        if a == b {
            p.set(a, a, p.get(a, a) + 2.0);
        } else {
            p.set(a, a, p.get(a, a) + 1.0);
            p.set(b, b, p.get(b, b) + 1.0);
            p.set(a, b, 1.0);
            p.set(b, a, 1.0);
        }
    }
    SymMatrix::from_dense(p, 0.0).expect("built symmetric")
}

/// `n x |E|` incidence matrix with `sqrt(2)` for self-loops; `L L^T = P`.
pub fn incidence(g: &LoopGraph) -> DenseMatrix {
    let mut l = DenseMatrix::zeros(g.n(), g.edge_count());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if a == b {
            l.set(a, e, std::f64::consts::SQRT_2);
        } else {
            l.set(a, e, 1.0);
            l.set(b, e, 1.0);
        }
    }
    l
}

/// A connected component with its bipartition, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    /// `p_side.len() >= q_side.len()`; an isolated vertex is `(1, 0)`.
    Bipartite {
        p_side: Vec<usize>,
        q_side: Vec<usize>,
    },
    NonBipartite { vertices: Vec<usize> },
}

impl Component {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Component::Bipartite { p_side, q_side } => {
                let mut v: Vec<usize> = p_side.iter().chain(q_side).copied().collect();
                v.sort_unstable();
                v
            }
            Component::NonBipartite { vertices } => vertices.clone(),
        }
    }

    pub fn lowest_vertex(&self) -> usize {
        match self {
            Component::Bipartite { p_side, q_side } => {
                let a = p_side.first().copied().unwrap_or(usize::MAX);
                let b = q_side.first().copied().unwrap_or(usize::MAX);
                a.min(b)
            }
            Component::NonBipartite { vertices } => vertices[0],
        }
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self, Component::Bipartite { .. })
    }

    /// `(p, q)` for bipartite components.
    pub fn sizes(&self) -> Option<(usize, usize)> {
        match self {
            Component::Bipartite { p_side, q_side } => Some((p_side.len(), q_side.len())),
            Component::NonBipartite { .. } => None,
        }
    }
}

/// Where a vertex sits in the bipartite structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexSide {
    /// On the larger side of the `k`-th bipartite component.
    P(usize),
    /// On the smaller side of the `k`-th bipartite component.
    Q(usize),
    /// In a component that is not bipartite.
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BipartitionSummary {
    n: usize,
    components: Vec<Component>,
    sides: Vec<VertexSide>,
    /// `(p_k, q_k)` for the bipartite components, in component order.
    sizes: Vec<(usize, usize)>,
    pub r: usize,
    pub s: usize,
    pub gamma: f64,
    pub d: f64,
}

impl BipartitionSummary {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn side(&self, v: usize) -> VertexSide {
        self.sides[v]
    }

    pub fn bipartite_sizes(&self) -> &[(usize, usize)] {
        &self.sizes
    }

    /// Bipartite components only, in the order used by `bipartite_sizes`.
    pub fn bipartite_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.is_bipartite())
    }
}

pub fn analyze_bipartition(g: &LoopGraph) -> BipartitionSummary {
    let n = g.n();
    let adj = g.adjacency();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut components = Vec::new();
    let mut sides = vec![VertexSide::Odd; n];
    let mut sizes = Vec::new();

    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut first = vec![start];
        let mut second = Vec::new();
        let mut bipartite = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            if g.has_self_loop(u) {
                bipartite = false;
            }
            let cu = colour[u].expect("coloured on discovery");
            for &w in &adj[u] {
                match colour[w] {
                    None => {
                        colour[w] = Some(!cu);
                        if cu {
                            first.push(w);
                        } else {
                            second.push(w);
                        }
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => bipartite = false,
                    Some(_) => {}
                }
            }
        }
        first.sort_unstable();
        second.sort_unstable();

        if bipartite {
            // ties keep the side holding the lowest vertex as p
            let (p_side, q_side) = if second.len() > first.len() {
                (second, first)
            } else {
                (first, second)
            };
            let k = sizes.len();
            for &v in &p_side {
                sides[v] = VertexSide::P(k);
            }
            for &v in &q_side {
                sides[v] = VertexSide::Q(k);
            }
            sizes.push((p_side.len(), q_side.len()));
            components.push(Component::Bipartite { p_side, q_side });
        } else {
            let mut vertices = first;
            vertices.extend(second);
            vertices.sort_unstable();
            components.push(Component::NonBipartite { vertices });
        }
    }

    let r = sizes.len();
    let covered: usize = sizes.iter().map(|(p, q)| p + q).sum();
    let gamma = sizes
        .iter()
        .map(|&(p, q)| {
            let diff = p as f64 - q as f64;
            diff * diff / (p + q) as f64
        })
        .sum();
    let d = sizes.iter().map(|&(p, q)| (p - q) as f64).sum();

    BipartitionSummary {
        n,
        components,
        sides,
        sizes,
        r,
        s: n - covered,
        gamma,
        d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_laplacian_is_zero() {
        assert_eq!(signless_laplacian(&LoopGraph::empty(3)), SymMatrix::zeros(3));
    }

    #[test]
    fn cycle_laplacian_pattern() {
        let p = signless_laplacian(&LoopGraph::cycle(4));
        assert_eq!(p.diag(), vec![2.0; 4]);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            assert_eq!(p.get(a, b), 1.0);
        }
        assert_eq!(p.get(0, 2), 0.0);
        assert_eq!(p.get(1, 3), 0.0);
    }

    #[test]
    fn self_loop_contributes_two() {
        let g = LoopGraph::new(1, [(0, 0)]).unwrap();
        assert_eq!(signless_laplacian(&g), SymMatrix::diagonal(&[2.0]));
        let deltas = crate::matcore::delta(&signless_laplacian(
            &LoopGraph::new(3, [(0, 0), (0, 1)]).unwrap(),
        ));
        assert_eq!(deltas, vec![2.0, 0.0, 0.0]);
    }

    #[test]
    fn incidence_columns() {
        let l = incidence(&LoopGraph::new(2, [(0, 1)]).unwrap());
        assert_eq!(l.column(0), vec![1.0, 1.0]);
        let l = incidence(&LoopGraph::new(2, [(0, 0)]).unwrap());
        assert_eq!(l.column(0), vec![std::f64::consts::SQRT_2, 0.0]);
    }

    #[test]
    fn edges_are_normalized_and_checked() {
        let g = LoopGraph::new(3, [(2, 0), (0, 2), (1, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 1)]);
        assert!(LoopGraph::new(3, [(0, 3)]).is_err());
        assert!(LoopGraph::from_one_based(3, [(0, 1)]).is_err());
        assert_eq!(
            LoopGraph::from_one_based(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap(),
            LoopGraph::cycle(4)
        );
    }

    #[test]
    fn even_cycle_is_balanced_bipartite() {
        let b = analyze_bipartition(&LoopGraph::cycle(4));
        assert_eq!(b.r, 1);
        assert_eq!(b.s, 0);
        assert_eq!(b.bipartite_sizes(), &[(2, 2)]);
        assert_eq!(b.gamma, 0.0);
        assert_eq!(b.d, 0.0);
        assert_eq!(
            b.components()[0],
            Component::Bipartite {
                p_side: vec![0, 2],
                q_side: vec![1, 3]
            }
        );
    }

    #[test]
    fn star_bipartition() {
        for n in 3..9 {
            let b = analyze_bipartition(&LoopGraph::star(n));
            assert_eq!(b.bipartite_sizes(), &[(n - 1, 1)]);
            let nf = n as f64;
            assert!((b.gamma - (nf - 2.0).powi(2) / nf).abs() < 1e-14);
            assert_eq!(b.side(0), VertexSide::Q(0));
        }
    }

    #[test]
    fn odd_cycle_and_loops_are_not_bipartite() {
        let b = analyze_bipartition(&LoopGraph::cycle(5));
        assert_eq!((b.r, b.s), (0, 5));
        let b = analyze_bipartition(&LoopGraph::new(3, [(0, 1), (1, 1)]).unwrap());
        assert_eq!((b.r, b.s), (1, 2));
        assert_eq!(b.bipartite_sizes(), &[(1, 0)]);
    }

    #[test]
    fn isolated_vertices_are_one_zero_components() {
        let b = analyze_bipartition(&LoopGraph::empty(4));
        assert_eq!(b.r, 4);
        assert_eq!(b.gamma, 4.0);
        assert_eq!(b.d, 4.0);
    }
}
