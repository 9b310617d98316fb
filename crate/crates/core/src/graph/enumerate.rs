//! Isomorphism-free enumeration of small connected graphs.
//!
//! Level `n` is grown from level `n - 1` by attaching a new vertex to every
//! nonempty subset of old vertices; every connected graph arises this way
//! because deleting a leaf of a spanning tree keeps it connected. Duplicates
//! are removed with a canonical code obtained by colour refinement plus
//! individualisation, taking the largest edge bitcode over all leaves of the
//! search tree.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Graph;
use crate::{Error, Result};

/// Largest vertex count accepted by [`connected_graphs`].
pub const MAX_ENUMERATION_ORDER: usize = 10;

type Masks = Vec<u16>;

/// One representative of every isomorphism class of connected simple
/// undirected graphs on `n` vertices, in ascending canonical-code order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidParameter(format!(
            "connected graph enumeration supports 1..={MAX_ENUMERATION_ORDER} vertices, got {n}"
        )));
    }
    let mut level: Vec<Masks> = vec![vec![0]];
    for k in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            for subset in 1u16..(1 << (k - 1)) {
                let mut h = g.clone();
                h.push(subset);
                for (v, row) in h.iter_mut().enumerate().take(k - 1) {
                    if subset >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                let code = code_of(&h);
                if seen.insert(code) {
                    next.push((code, h));
                }
            }
        }
        next.sort_by_key(|&(c, _)| c);
        level = next.into_iter().map(|(_, h)| h).collect();
    }
    Ok(level.iter().map(|m| to_graph(m)).collect())
}

/// Canonical code of an undirected graph with at most
/// [`MAX_ENUMERATION_ORDER`] vertices: two graphs receive the same code iff
/// they are isomorphic.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    if g.is_directed() || g.n() > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidParameter(format!(
            "canonical codes need an undirected graph on at most {MAX_ENUMERATION_ORDER} vertices"
        )));
    }
    let masks: Masks = (0..g.n())
        .map(|v| g.neighbours(v).iter().fold(0u16, |m, &w| m | 1 << w))
        .collect();
    Ok(code_of(&masks))
}

fn to_graph(masks: &[u16]) -> Graph {
    let n = masks.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if masks[u] >> v & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, false, &edges).expect("enumerated graphs are simple")
}

fn code_of(masks: &[u16]) -> u64 {
    let colours = refine(masks, vec![0; masks.len()]);
    let mut best = 0;
    search(masks, colours, &mut best);
    best
}

/// Refines a colouring until stable. Colours are ranks of
/// `(colour, sorted neighbour colours)` signatures, so the result is
/// invariant under relabelling.
fn refine(masks: &[u16], mut colours: Vec<u8>) -> Vec<u8> {
    let n = masks.len();
    let mut classes = distinct(&colours);
    loop {
        let sigs: Vec<(u8, Vec<u8>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u8> =
                    (0..n).filter(|&w| masks[v] >> w & 1 == 1).map(|w| colours[w]).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let mut order: Vec<&(u8, Vec<u8>)> = sigs.iter().collect();
        order.sort();
        order.dedup();
        colours = sigs
            .iter()
            .map(|s| order.binary_search(&s).expect("signature present") as u8)
            .collect();
        let now = order.len();
        if now == classes {
            return colours;
        }
        classes = now;
    }
}

fn distinct(colours: &[u8]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(masks: &[u16], colours: Vec<u8>, best: &mut u64) {
    let n = masks.len();
    let mut counts = [0usize; 16];
    for &c in &colours {
        counts[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
        *best = (*best).max(leaf_code(masks, &colours));
        return;
    };
    for v in (0..n).filter(|&v| colours[v] as usize == target) {
        let split: Vec<u8> = colours
            .iter()
            .enumerate()
            .map(|(w, &c)| {
                let c = 2 * c;
                if c as usize == 2 * target && w != v {
                    c + 1
                } else {
                    c
                }
            })
            .collect();
        search(masks, refine(masks, split), best);
    }
}

fn leaf_code(masks: &[u16], colours: &[u8]) -> u64 {
    let n = masks.len();
    let mut at = [0usize; 16];
    for (v, &c) in colours.iter().enumerate() {
        at[c as usize] = v;
    }
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | u64::from(masks[at[i]] >> at[j] & 1);
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    #[test]
    fn known_class_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn code_is_relabelling_invariant() {
        let a = Graph::new(5, false, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let b = Graph::new(5, false, &[(3, 0), (0, 4), (4, 2), (2, 1), (1, 3), (3, 4)]).unwrap();
        assert_eq!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
        let c5 = generate(&GraphFamily::Cycle(5)).unwrap();
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&c5).unwrap());
    }

    #[test]
    fn enumerated_graphs_are_connected() {
        for g in connected_graphs(6).unwrap() {
            assert!(g.is_irreducible());
        }
    }
}
