//! Incremental graph assembly with vertex identification.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::GadgetGraph;
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Collects vertices, edges and port names over provisional ids; identified
/// vertices are merged with union-find when the graph is finished.
#[derive(Debug)]
pub(crate) struct Builder {
    directed: bool,
    parent: Vec<usize>,
    edges: Vec<(usize, usize)>,
    single: Vec<(String, usize)>,
    lists: BTreeMap<String, Vec<usize>>,
}

impl Builder {
    pub fn new(directed: bool) -> Self {
        Builder { directed, parent: Vec::new(), edges: Vec::new(), single: Vec::new(), lists: BTreeMap::new() }
    }

    pub fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    pub fn vertices(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.vertex()).collect()
    }

    pub fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Identifies two vertices; edges and names of both carry over.
    pub fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Names a single vertex. Reusing a name for a different final vertex is
    /// a construction error.
    pub fn name(&mut self, name: impl Into<String>, v: usize) {
        self.single.push((name.into(), v));
    }

    /// Appends `v` to a named port list.
    pub fn push(&mut self, name: &str, v: usize) {
        self.lists.entry(name.into()).or_default().push(v);
    }

    pub fn finish(mut self, unvisited: Option<Vec<usize>>, start: Option<usize>) -> Result<GadgetGraph> {
        let raw = self.parent.len();
        let mut id = Vec::with_capacity(raw);
        let mut next = 0;
        let mut root_id = alloc::vec![usize::MAX; raw];
        for v in 0..raw {
            let r = self.find(v);
            if root_id[r] == usize::MAX {
                root_id[r] = next;
                next += 1;
            }
            id.push(root_id[r]);
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (id[u], id[v])).collect();
        let mut graph = Graph::new(next, self.directed, &edges)?;
        let mut ports: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (name, v) in &self.single {
            let v = id[*v];
            match graph.label(name) {
                Some(w) if w != v => {
                    return Err(Error::Construction(format!("port {name} names vertices {w} and {v}")));
                }
                Some(_) => {}
                None => {
                    if ports.contains_key(name) {
                        return Err(Error::Construction(format!("port {name} is both a list and a vertex")));
                    }
                    graph.set_label(name.clone(), v)?;
                    ports.insert(name.clone(), alloc::vec![v]);
                }
            }
        }
        for (name, list) in self.lists {
            if ports.contains_key(&name) {
                return Err(Error::Construction(format!("port {name} is both a list and a vertex")));
            }
            ports.insert(name, list.into_iter().map(|v| id[v]).collect());
        }
        let unvisited = unvisited.map(|u| VertexSet::from_iter(next, u.into_iter().map(|v| id[v])));
        Ok(GadgetGraph { graph, ports, unvisited, start: start.map(|v| id[v]) })
    }
}
