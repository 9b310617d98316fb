use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::Graph;
use crate::rng::substream;
use crate::{Error, Result};

/// Parametrised graph families.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Path(usize),
    Cycle(usize),
    /// Centre `0` joined to `leaves` leaves.
    Star { leaves: usize },
    Complete(usize),
    CompleteBipartite(usize, usize),
    Petersen,
    /// `units` copies of `K_{d,d}` in a cycle; each copy has an entry vertex
    /// joined to one side and an exit vertex joined to the other, and the
    /// exit of each copy is joined to the entry of the next.
    Ring { units: usize, d: usize },
    /// Erdős–Rényi graph, one coin per unordered pair in index order.
    Gnp { n: usize, p: f64, seed: u64 },
    /// Complete binary tree with `2^(depth+1) - 1` vertices, heap-ordered.
    BinaryTree { depth: usize },
}

impl GraphFamily {
    /// Short identifier used in reports, e.g. `ring(2,3)`.
    pub fn id(&self) -> String {
        match self {
            GraphFamily::Path(n) => format!("path({n})"),
            GraphFamily::Cycle(n) => format!("cycle({n})"),
            GraphFamily::Star { leaves } => format!("star({leaves})"),
            GraphFamily::Complete(n) => format!("complete({n})"),
            GraphFamily::CompleteBipartite(a, b) => format!("bipartite({a},{b})"),
            GraphFamily::Petersen => "petersen".into(),
            GraphFamily::Ring { units, d } => format!("ring({units},{d})"),
            GraphFamily::Gnp { n, p, seed } => format!("gnp({n},{p},{seed})"),
            GraphFamily::BinaryTree { depth } => format!("bintree({depth})"),
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

pub fn generate(family: &GraphFamily) -> Result<Graph> {
    let mut edges = Vec::new();
    let n = match *family {
        GraphFamily::Path(n) => {
            if n == 0 {
                return Err(invalid("path needs at least one vertex".into()));
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        GraphFamily::Cycle(n) => {
            if n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            n
        }
        GraphFamily::Star { leaves } => {
            if leaves == 0 {
                return Err(invalid("star needs at least one leaf".into()));
            }
            edges.extend((1..=leaves).map(|i| (0, i)));
            leaves + 1
        }
        GraphFamily::Complete(n) => {
            if n == 0 {
                return Err(invalid("complete graph needs at least one vertex".into()));
            }
            for i in 0..n {
                edges.extend((i + 1..n).map(|j| (i, j)));
            }
            n
        }
        GraphFamily::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return Err(invalid(format!("bipartite sides must be nonempty, got {a},{b}")));
            }
            for i in 0..a {
                edges.extend((0..b).map(|j| (i, a + j)));
            }
            a + b
        }
        GraphFamily::Petersen => {
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((i + 5, (i + 2) % 5 + 5));
            }
            10
        }
        GraphFamily::Ring { units, d } => {
            if units < 2 || d == 0 {
                return Err(invalid(format!("ring needs units >= 2 and d >= 1, got {units},{d}")));
            }
            let block = 2 * (d + 1);
            for i in 0..units {
                let base = i * block;
                let entry = base;
                let exit = base + 2 * d + 1;
                for j in 0..d {
                    edges.push((entry, base + 1 + j));
                    edges.push((base + 1 + d + j, exit));
                    for k in 0..d {
                        edges.push((base + 1 + j, base + 1 + d + k));
                    }
                }
                edges.push((exit, ((i + 1) % units) * block));
            }
            units * block
        }
        GraphFamily::Gnp { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("edge probability {p} outside [0,1]")));
            }
            let mut rng = substream(seed, 0);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((i, j));
                    }
                }
            }
            n
        }
        GraphFamily::BinaryTree { depth } => {
            let n = (1usize << (depth + 1)) - 1;
            edges.extend((1..n).map(|i| ((i - 1) / 2, i)));
            n
        }
    };
    Graph::new(n, false, &edges)
}

/// The named test library: paths, cycles, stars, complete graphs, balanced
/// complete bipartite graphs, the Petersen graph and `ring(2,3)`, all with at
/// most 16 vertices.
pub fn library() -> Vec<(String, Graph)> {
    let mut fams = Vec::new();
    fams.extend([2, 3, 4, 5, 6, 8, 12, 16].map(GraphFamily::Path));
    fams.extend([3, 4, 5, 6, 8, 12, 16].map(GraphFamily::Cycle));
    fams.extend([2, 3, 4, 5, 8, 15].map(|leaves| GraphFamily::Star { leaves }));
    fams.extend([3, 4, 5, 6, 8, 12, 16].map(GraphFamily::Complete));
    fams.extend([2, 3, 4, 8].map(|d| GraphFamily::CompleteBipartite(d, d)));
    fams.push(GraphFamily::Petersen);
    fams.push(GraphFamily::Ring { units: 2, d: 3 });
    fams.into_iter()
        .map(|f| {
            let g = generate(&f).expect("library parameters are valid");
            (f.id(), g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Connectivity;

    #[test]
    fn path_three() {
        let g = generate(&GraphFamily::Path(3)).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), [1, 2, 1]);
        assert_eq!(g.bfs_distances(0), [Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn ring_two_three_is_four_regular_on_sixteen() {
        let g = generate(&GraphFamily::Ring { units: 2, d: 3 }).unwrap();
        assert_eq!(g.n(), 16);
        assert!((0..16).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn ring_regular_and_connected() {
        for units in 2..=16 {
            for d in 1..=5 {
                let g = generate(&GraphFamily::Ring { units, d }).unwrap();
                assert_eq!(g.n(), 2 * units * (d + 1));
                assert!((0..g.n()).all(|v| g.degree(v) == d + 1));
                assert_eq!(g.connectivity(), Connectivity::Connected);
            }
        }
        assert!(generate(&GraphFamily::Ring { units: 1, d: 3 }).is_err());
    }

    #[test]
    fn gnp_full_probability_is_complete() {
        let g = generate(&GraphFamily::Gnp { n: 5, p: 1.0, seed: 7 }).unwrap();
        assert_eq!(g, generate(&GraphFamily::Complete(5)).unwrap());
    }

    #[test]
    fn gnp_is_seed_deterministic() {
        let f = GraphFamily::Gnp { n: 12, p: 0.4, seed: 99 };
        assert_eq!(generate(&f).unwrap(), generate(&f).unwrap());
        let other = generate(&GraphFamily::Gnp { n: 12, p: 0.4, seed: 100 }).unwrap();
        assert_ne!(generate(&f).unwrap(), other);
    }

    #[test]
    fn degree_examples() {
        let k33 = generate(&GraphFamily::CompleteBipartite(3, 3)).unwrap().degree_stats();
        assert_eq!((k33.d_min, k33.d_max), (3, 3));
        assert_eq!(k33.d_avg, 3.0);
        let star = generate(&GraphFamily::Star { leaves: 5 }).unwrap().degree_stats();
        assert_eq!((star.d_min, star.d_max), (1, 5));
        assert!((star.d_avg - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn petersen_distance_profile() {
        let g = generate(&GraphFamily::Petersen).unwrap();
        assert!((0..10).all(|v| g.degree(v) == 3));
        for u in 0..10 {
            let d = g.bfs_distances(u);
            assert_eq!(d.iter().filter(|x| **x == Some(1)).count(), 3);
            assert_eq!(d.iter().filter(|x| **x == Some(2)).count(), 6);
        }
    }

    #[test]
    fn handshake_identity_over_library() {
        for (_, g) in library() {
            let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
            assert_eq!(total, 2 * g.edge_count());
            assert!(g.n() <= 16);
        }
    }
}
