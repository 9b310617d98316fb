//! Finite simple graphs, directed or undirected, with optional edge weights.
//!
//! Vertices are the dense indices `0..n`. Neighbour lists are kept sorted so
//! every traversal in the crate is deterministic; named vertices live in a
//! label side table.

mod enumerate;
mod generate;
mod vertex_set;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use enumerate::{canonical_code, connected_graphs};
pub use generate::{generate, library, GraphFamily};
pub use vertex_set::VertexSet;

/// Reachability class of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// Undirected and connected.
    Connected,
    /// Directed and strongly connected.
    StronglyConnected,
    Neither,
}

/// Degree summary. For directed graphs the degrees are out-degrees and `m`
/// counts arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub d_min: usize,
    pub d_max: usize,
    pub d_avg: f64,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    adj: Vec<Vec<usize>>,
    /// Parallel to `adj`; `None` means every edge has weight one.
    weights: Option<Vec<Vec<f64>>>,
    labels: BTreeMap<String, usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Undirected edges are given once.
    pub fn new(n: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, directed, edges, None)
    }

    /// Builds a weighted graph; `weights[i]` belongs to `edges[i]`.
    pub fn with_weights(
        n: usize,
        directed: bool,
        edges: &[(usize, usize)],
        weights: &[f64],
    ) -> Result<Self> {
        if weights.len() != edges.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} weights for {} edges",
                weights.len(),
                edges.len()
            )));
        }
        Self::build(n, directed, edges, Some(weights))
    }

    fn build(
        n: usize,
        directed: bool,
        edges: &[(usize, usize)],
        weights: Option<&[f64]>,
    ) -> Result<Self> {
        let mut lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let w = weights.map_or(1.0, |ws| ws[i]);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight(w));
            }
            lists[u].push((v, w));
            if !directed {
                lists[v].push((u, w));
            }
        }
        let mut adj = Vec::with_capacity(n);
        let mut wts = Vec::with_capacity(n);
        for (u, mut list) in lists.into_iter().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::DuplicateEdge(u, pair[0].0));
            }
            adj.push(list.iter().map(|&(v, _)| v).collect());
            wts.push(list.iter().map(|&(_, w)| w).collect());
        }
        Ok(Graph {
            directed,
            adj,
            weights: weights.map(|_| wts),
            labels: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Sorted out-neighbours of `v`.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Weight of the `i`-th out-edge of `v`.
    pub fn weight_at(&self, v: usize, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[v][i])
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let i = self.adj[u].binary_search(&v).ok()?;
        Some(self.weight_at(u, i))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Total out-weight of `v`.
    pub fn weighted_degree(&self, v: usize) -> f64 {
        match &self.weights {
            Some(w) => w[v].iter().sum(),
            None => self.adj[v].len() as f64,
        }
    }

    /// Edge list in ascending order; undirected edges appear once with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Weights in the order of [`Graph::edges`], or `None` when unweighted.
    pub fn edge_weights(&self) -> Option<Vec<f64>> {
        let w = self.weights.as_ref()?;
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for (i, &v) in list.iter().enumerate() {
                if self.directed || u < v {
                    out.push(w[u][i]);
                }
            }
        }
        Some(out)
    }

    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.adj.iter().map(Vec::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn labels(&self) -> &BTreeMap<String, usize> {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Option<usize> {
        self.labels.get(name).copied()
    }

    /// Attaches a label, replacing any vertex previously carrying it.
    pub fn set_label(&mut self, name: impl Into<String>, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        self.labels.insert(name.into(), v);
        Ok(())
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let n = self.n();
        let degs = self.adj.iter().map(Vec::len);
        let d_min = degs.clone().min().unwrap_or(0);
        let d_max = degs.clone().max().unwrap_or(0);
        let total: usize = degs.sum();
        DegreeStats {
            d_min,
            d_max,
            d_avg: if n == 0 { 0.0 } else { total as f64 / n as f64 },
            m: self.edge_count(),
        }
    }

    /// Hop distances from `u`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, u: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[u] = Some(0);
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap_or(0) + 1;
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Vertices from which some vertex of `target` is reachable.
    pub fn can_reach(&self, target: &VertexSet) -> VertexSet {
        let rev = self.reverse_adjacency();
        let mut seen = target.clone();
        let mut stack: Vec<usize> = target.iter().collect();
        while let Some(x) = stack.pop() {
            for &y in &rev[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub(crate) fn reverse_adjacency(&self) -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); self.n()];
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                rev[v].push(u);
            }
        }
        rev
    }

    pub fn connectivity(&self) -> Connectivity {
        let n = self.n();
        if n == 0 {
            return Connectivity::Neither;
        }
        let forward = self.bfs_distances(0).iter().all(Option::is_some);
        if !self.directed {
            return if forward { Connectivity::Connected } else { Connectivity::Neither };
        }
        if forward && self.can_reach(&VertexSet::singleton(n, 0)).len() == n {
            Connectivity::StronglyConnected
        } else {
            Connectivity::Neither
        }
    }

    /// Connected (undirected) or strongly connected (directed).
    pub fn is_irreducible(&self) -> bool {
        self.connectivity() != Connectivity::Neither
    }

    /// Whether the subgraph induced on `set` is connected, or strongly
    /// connected for directed graphs.
    pub fn induces_connected(&self, set: &VertexSet) -> bool {
        let Some(root) = set.iter().next() else {
            return false;
        };
        let sweep = |adj: &[Vec<usize>]| {
            let mut seen = VertexSet::singleton(self.n(), root);
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if set.contains(y) && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            seen.len() == set.len()
        };
        if !sweep(&self.adj) {
            return false;
        }
        !self.directed || sweep(&self.reverse_adjacency())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_one() -> Graph {
        // u v w x y z
        Graph::new(6, false, &[(0, 1), (0, 4), (0, 2), (2, 3), (2, 5), (1, 3), (1, 5), (5, 4)])
            .unwrap()
    }

    #[test]
    fn rejects_self_loops_and_parallel_edges() {
        assert_eq!(Graph::new(2, false, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::new(2, false, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(Graph::new(2, true, &[(0, 1), (1, 0)]).is_ok());
        assert!(matches!(
            Graph::with_weights(2, false, &[(0, 1)], &[0.0]),
            Err(Error::NonPositiveWeight(_))
        ));
    }

    #[test]
    fn undirected_adjacency_is_symmetric_and_sorted() {
        let g = figure_one();
        for u in 0..g.n() {
            assert!(g.neighbours(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbours(u) {
                assert!(g.has_edge(v, u));
            }
        }
        assert_eq!(g.neighbours(1), &[0, 3, 5]);
    }

    #[test]
    fn figure_one_average_degree() {
        let s = figure_one().degree_stats();
        assert_eq!(s.m, 8);
        assert!((s.d_avg - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!((s.d_min, s.d_max), (2, 3));
    }

    #[test]
    fn connectivity_classes() {
        assert_eq!(Graph::new(2, false, &[]).unwrap().connectivity(), Connectivity::Neither);
        let cyc = Graph::new(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cyc.connectivity(), Connectivity::StronglyConnected);
        let line = Graph::new(3, true, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(line.connectivity(), Connectivity::Neither);
    }

    #[test]
    fn induced_connectivity() {
        let g = Graph::new(4, false, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(g.induces_connected(&VertexSet::from_iter(4, [1, 2, 3])));
        assert!(!g.induces_connected(&VertexSet::from_iter(4, [0, 2])));
        assert!(!g.induces_connected(&VertexSet::new(4)));
    }

    #[test]
    fn weights_follow_edge_order() {
        let g = Graph::with_weights(3, false, &[(1, 2), (0, 1)], &[4.0, 2.0]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.edge_weights(), Some(vec![2.0, 4.0]));
        assert_eq!(g.edge_weight(2, 1), Some(4.0));
        assert_eq!(g.weighted_degree(1), 6.0);
    }
}
