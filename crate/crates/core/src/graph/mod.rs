//! Simple undirected graphs with dense vertex ids, the locally irregular
//! predicates, generators and exception recognition.

mod canonical;
mod decomposition;
mod exception;
mod generate;
mod io;

pub use canonical::{canonical_form, CanonicalForm};
pub use decomposition::{
    class_subgraph, is_locally_irregular_decomposition, Decomposition, DecompositionError,
};
pub use exception::{is_t_family_member, recognize_exception, ExceptionClass};
pub use generate::{
    complete, complete_bipartite, cycle, generate, gnp, path, random_regular, spider, star,
    t_family, Family, TStep,
};
pub use io::{parse_edge_list, serialize_edge_list};

use std::collections::VecDeque;

use thiserror::Error;

/// Errors raised while building, parsing or querying graphs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("unknown vertex {vertex} (graph has {n} vertices)")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("illegal construction step {step}: {reason}")]
    IllegalStep { step: usize, reason: String },
    #[error("graph is not connected")]
    Disconnected,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted; the position of an
/// edge in that list is its edge id. Adjacency lists carry `(neighbour, edge id)`
/// pairs sorted by neighbour.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, parallel edges and out-of-range ids.
    /// Pairs may be given in either orientation.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::UnknownVertex { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unchecked(n, edges))
    }

    // `edges` must be sorted, deduplicated and satisfy u < v < n.
    fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges `(u, v)` with `u < v`, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Degree of `v`. Panics on an unknown vertex; see [`Graph::try_degree`].
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn try_degree(&self, v: usize) -> Result<usize, GraphError> {
        self.adj
            .get(v)
            .map(Vec::len)
            .ok_or(GraphError::UnknownVertex {
                vertex: v,
                n: self.n,
            })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    /// `(neighbour, edge id)` pairs around `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Spanning subgraph keeping the edges whose id is marked in `keep`.
    pub fn edge_subgraph(&self, keep: &[bool]) -> Graph {
        self.edge_subgraph_with_map(keep).0
    }

    /// Like [`Graph::edge_subgraph`], also returning for each edge id of the
    /// subgraph the id of the same edge in `self`.
    pub fn edge_subgraph_with_map(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        assert_eq!(keep.len(), self.edges.len(), "edge mask length mismatch");
        let map: Vec<usize> = (0..self.edges.len()).filter(|&e| keep[e]).collect();
        let edges = map.iter().map(|&e| self.edges[e]).collect();
        (Self::from_sorted_unchecked(self.n, edges), map)
    }

    /// Whether every edge of `other` is an edge of `self` (vertex counts must match).
    pub fn contains_subgraph(&self, other: &Graph) -> bool {
        other.n == self.n && other.edges.iter().all(|&(u, v)| self.has_edge(u, v))
    }

    /// Edge-id mask of `other`'s edges inside `self`. `None` if `other` is not a subgraph.
    pub fn mask_of(&self, other: &Graph) -> Option<Vec<bool>> {
        if other.n != self.n {
            return None;
        }
        let mut mask = vec![false; self.edges.len()];
        for &(u, v) in &other.edges {
            mask[self.edge_id(u, v)?] = true;
        }
        Some(mask)
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True for graphs with at most one component (the null graph counts as connected).
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| {
                let (a, b) = (index[u], index[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Self::from_sorted_unchecked(vertices.len(), edges)
    }

    /// Whether `v` lies on a triangle.
    pub fn on_triangle(&self, v: usize) -> bool {
        let nbrs: Vec<usize> = self.neighbors(v).collect();
        nbrs.iter()
            .enumerate()
            .any(|(i, &a)| nbrs[i + 1..].iter().any(|&b| self.has_edge(a, b)))
    }
}

/// True iff adjacent vertices always have distinct degrees (vacuous without edges).
pub fn is_locally_irregular(g: &Graph) -> bool {
    g.edges().iter().all(|&(u, v)| g.degree(u) != g.degree(v))
}

/// Edges joining two vertices of equal degree.
pub fn irregular_conflicts(g: &Graph) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| g.degree(u) == g.degree(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_examples() {
        let c4 = cycle(4).unwrap();
        assert!((0..4).all(|v| c4.degree(v) == 2));
        let k5 = complete(5);
        assert!((0..5).all(|v| k5.degree(v) == 4));
        assert_eq!(path(2).degree(1), 2);
        assert_eq!(
            path(2).try_degree(7),
            Err(GraphError::UnknownVertex { vertex: 7, n: 3 })
        );
    }

    #[test]
    fn construction_rejects_non_simple_input() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::UnknownVertex { vertex: 2, .. })
        ));
    }

    #[test]
    fn locally_irregular_examples() {
        assert!(is_locally_irregular(&path(2)));
        assert!(!is_locally_irregular(&path(1)));
        assert!(!is_locally_irregular(&cycle(4).unwrap()));
        assert!(is_locally_irregular(&star(3)));
        assert!(is_locally_irregular(&Graph::empty(4)));
    }

    #[test]
    fn handshake_and_lookup() {
        let g = complete_bipartite(3, 4);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_id(u, v), Some(id));
            assert_eq!(g.edge_id(v, u), Some(id));
        }
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn edge_subgraph_maps_ids_back() {
        let g = complete(4);
        let keep: Vec<bool> = (0..g.edge_count()).map(|e| e % 2 == 0).collect();
        let (h, map) = g.edge_subgraph_with_map(&keep);
        assert_eq!(h.edge_count(), 3);
        for (sub, &parent) in map.iter().enumerate() {
            assert_eq!(h.edge(sub), g.edge(parent));
        }
        assert!(g.contains_subgraph(&h));
        assert_eq!(g.mask_of(&h).unwrap(), keep);
    }

    #[test]
    fn components_and_triangles() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(!g.is_connected());
        assert!(g.on_triangle(0));
        assert!(!g.on_triangle(3));
    }
}
