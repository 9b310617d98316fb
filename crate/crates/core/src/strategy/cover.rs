//! Optimal cover strategies by dynamic programming over visited sets.
//!
//! The state of a covering walk is the pair (current vertex, visited set).
//! While the visited set `S` is unchanged an optimal controller uses a fixed
//! deterministic rule, so the values `t(v, S)` for one `S` solve a small
//! first-passage problem whose exits `y ∉ S` carry the already known values
//! `t(y, S ∪ {y})` of larger sets. Sets are processed by decreasing size.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::mdp::{FirstPassage, Sense, Succ};
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Largest vertex count the visited-set tables accept.
pub const COVER_CAP: usize = 20;

/// Values and choices for one visited set, indexed by vertex. Entries for
/// vertices outside the set are `NaN` and `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverLayer {
    pub values: Vec<f64>,
    pub choice: Vec<Option<usize>>,
}

/// Optimal controller for covering, keyed by visited-set bit mask.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverPolicy {
    n: usize,
    eps: f64,
    initial: u32,
    layers: BTreeMap<u32, CoverLayer>,
}

impl CoverPolicy {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Visited set the tables were grown from.
    pub fn initial_mask(&self) -> u32 {
        self.initial
    }

    pub fn layers(&self) -> &BTreeMap<u32, CoverLayer> {
        &self.layers
    }

    /// Optimal expected remaining cover time at `v` having visited `mask`.
    pub fn value(&self, v: usize, mask: u32) -> Option<f64> {
        let layer = self.layers.get(&mask)?;
        let x = *layer.values.get(v)?;
        (!x.is_nan()).then_some(x)
    }

    /// Preferred next vertex at `v` having visited `mask`; `None` once the
    /// graph is covered.
    pub fn choice(&self, v: usize, mask: u32) -> Option<usize> {
        *self.layers.get(&mask)?.choice.get(v)?
    }
}

fn mask_of(set: &VertexSet) -> u32 {
    set.iter().fold(0u32, |m, v| m | 1 << v)
}

fn check_common(g: &Graph, eps: f64) -> Result<()> {
    let n = g.n();
    if n > COVER_CAP {
        return Err(Error::TooManyVertices { n, cap: COVER_CAP });
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("bias {eps} outside [0,1]")));
    }
    if !g.is_irreducible() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Optimal covering strategy from `start` with nothing else visited.
pub fn optimal_cover_policy(g: &Graph, start: usize, eps: f64) -> Result<CoverPolicy> {
    if start >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: start, n: g.n() });
    }
    cover_policy_from(g, &VertexSet::singleton(g.n(), start), eps)
}

/// Cover tables for every visited set reachable from `initial`.
pub fn cover_policy_from(g: &Graph, initial: &VertexSet, eps: f64) -> Result<CoverPolicy> {
    check_common(g, eps)?;
    let n = g.n();
    if initial.is_empty() {
        return Err(Error::Infeasible("empty visited set".into()));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let start = mask_of(initial);

    let mut seen = vec![false; 1usize << n];
    let mut order = Vec::new();
    let mut stack = vec![start];
    seen[start as usize] = true;
    while let Some(s) = stack.pop() {
        order.push(s);
        for v in (0..n).filter(|&v| s >> v & 1 == 1) {
            for &y in g.neighbours(v) {
                let t = s | 1 << y;
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
    }
    order.sort_by_key(|&s| (core::cmp::Reverse(s.count_ones()), s));

    let rev = g.reverse_adjacency();
    let mut layers: BTreeMap<u32, CoverLayer> = BTreeMap::new();
    for s in order {
        let members: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
        let mut values = vec![f64::NAN; n];
        let mut choice = vec![None; n];
        if s == full {
            for &v in &members {
                values[v] = 0.0;
            }
            layers.insert(s, CoverLayer { values, choice });
            continue;
        }
        let mut index = vec![usize::MAX; n];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let succ: Vec<Vec<Succ>> = members
            .iter()
            .map(|&v| {
                g.neighbours(v)
                    .iter()
                    .map(|&y| {
                        if s >> y & 1 == 1 {
                            Succ::State(index[y])
                        } else {
                            Succ::Fixed(layers[&(s | 1 << y)].values[y])
                        }
                    })
                    .collect()
            })
            .collect();
        let mdp = FirstPassage { succ, step_cost: 1.0, sense: Sense::Minimize };
        let initial_policy = exit_greedy(g, &rev, s, &members);
        let sol = mdp.solve(eps, initial_policy)?;
        for (i, &v) in members.iter().enumerate() {
            values[v] = sol.values[i];
            choice[v] = Some(g.neighbours(v)[sol.policy[i]]);
        }
        layers.insert(s, CoverLayer { values, choice });
    }
    Ok(CoverPolicy { n, eps, initial: start, layers })
}

/// Points every vertex of `s` one hop closer to the unvisited vertices. This
/// is a proper policy even for `ε = 1`.
fn exit_greedy(g: &Graph, rev: &[Vec<usize>], s: u32, members: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut queue = alloc::collections::VecDeque::new();
    for v in (0..n).filter(|&v| s >> v & 1 == 0) {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(x) = queue.pop_front() {
        for &w in &rev[x] {
            if dist[w] == usize::MAX && s >> w & 1 == 1 {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    members
        .iter()
        .map(|&v| {
            let nb = g.neighbours(v);
            (0..nb.len()).min_by_key(|&k| (dist[nb[k]], k)).expect("vertex has out-neighbours")
        })
        .collect()
}

/// A visited set is feasible when it contains the walker and induces a
/// connected (strongly connected, if directed) subgraph.
fn check_feasible(g: &Graph, u: Option<usize>, x: &VertexSet) -> Result<()> {
    if x.capacity() != g.n() {
        return Err(Error::Infeasible("visited set has the wrong capacity".into()));
    }
    if let Some(u) = u {
        if !x.contains(u) {
            return Err(Error::Infeasible(format!("current vertex {u} is not in the visited set")));
        }
    }
    if !g.induces_connected(x) {
        return Err(Error::Infeasible("visited set does not induce a connected subgraph".into()));
    }
    Ok(())
}

fn strictly_less(a: f64, b: f64) -> bool {
    a < b - 1e-9 * 1.0f64.max(b.abs())
}

/// Whether the optimal expected time to finish covering from `u`, having
/// visited `x`, is strictly below `c`.
pub fn cost_decision(g: &Graph, u: usize, x: &VertexSet, c: f64, eps: f64) -> Result<bool> {
    check_feasible(g, Some(u), x)?;
    let policy = cover_policy_from(g, x, eps)?;
    let value = policy.value(u, mask_of(x)).expect("root set is tabulated");
    Ok(strictly_less(value, c))
}

/// Whether stepping to `y` is strictly better than stepping to `z` from the
/// visited set `x`.
pub fn best_step(g: &Graph, x: &VertexSet, y: usize, z: usize, eps: f64) -> Result<bool> {
    check_feasible(g, None, x)?;
    for w in [y, z] {
        if w >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: w, n: g.n() });
        }
        if !x.contains(w) && !x.iter().any(|v| g.has_edge(v, w)) {
            return Err(Error::Infeasible(format!("vertex {w} is not adjacent to the visited set")));
        }
    }
    let policy = cover_policy_from(g, x, eps)?;
    let base = mask_of(x);
    let vy = policy.value(y, base | 1 << y).expect("successor set is tabulated");
    let vz = policy.value(z, base | 1 << z).expect("successor set is tabulated");
    Ok(strictly_less(vy, vz))
}

/// Optimal bias row at `u` having visited `x`: a point mass on the best
/// neighbour, ties to the smallest index.
pub fn next_step(g: &Graph, u: usize, x: &VertexSet, eps: f64) -> Result<Vec<(usize, f64)>> {
    check_feasible(g, Some(u), x)?;
    let policy = cover_policy_from(g, x, eps)?;
    let pick = policy.choice(u, mask_of(x)).unwrap_or(g.neighbours(u)[0]);
    Ok(g.neighbours(u).iter().map(|&y| (y, if y == pick { 1.0 } else { 0.0 })).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn fam(f: GraphFamily) -> Graph {
        generate(&f).unwrap()
    }

    #[test]
    fn triangle_cover_value() {
        let k3 = fam(GraphFamily::Complete(3));
        for start in 0..3 {
            let p = optimal_cover_policy(&k3, start, 0.25).unwrap();
            let v = p.value(start, 1 << start).unwrap();
            assert!((v - 2.6).abs() < 1e-9);
        }
    }

    #[test]
    fn path_cover_values() {
        let p3 = fam(GraphFamily::Path(3));
        let v0 = optimal_cover_policy(&p3, 1, 0.0).unwrap().value(1, 0b010).unwrap();
        assert!((v0 - 5.0).abs() < 1e-9);
        let v1 = optimal_cover_policy(&p3, 1, 1.0).unwrap().value(1, 0b010).unwrap();
        assert!((v1 - 3.0).abs() < 1e-9);
    }

    #[test]
    fn full_set_is_zero() {
        let p = optimal_cover_policy(&fam(GraphFamily::Cycle(4)), 0, 0.5).unwrap();
        assert_eq!(p.value(2, 0b1111), Some(0.0));
        assert_eq!(p.choice(2, 0b1111), None);
    }

    #[test]
    fn decisions() {
        let k3 = fam(GraphFamily::Complete(3));
        let x = VertexSet::singleton(3, 0);
        assert!(cost_decision(&k3, 0, &x, 2.7, 0.25).unwrap());
        assert!(!cost_decision(&k3, 0, &x, 2.6, 0.25).unwrap());
        assert!(cost_decision(&k3, 0, &VertexSet::full(3), 1e-6, 0.25).unwrap());
        let p3 = fam(GraphFamily::Path(3));
        assert!(!best_step(&p3, &VertexSet::singleton(3, 1), 0, 2, 0.25).unwrap());
        let p4 = fam(GraphFamily::Path(4));
        let x = VertexSet::from_iter(4, [1, 2]);
        assert!(best_step(&p4, &x, 0, 3, 0.25).is_ok());
        assert!(best_step(&p3, &VertexSet::from_iter(3, [0, 1]), 2, 0, 0.25).unwrap());
    }

    #[test]
    fn next_step_examples() {
        let p3 = fam(GraphFamily::Path(3));
        let row = next_step(&p3, 0, &VertexSet::from_iter(3, [0, 1]), 0.5).unwrap();
        assert_eq!(row, [(1, 1.0)]);
        let k3 = fam(GraphFamily::Complete(3));
        let row = next_step(&k3, 0, &VertexSet::singleton(3, 0), 0.25).unwrap();
        assert_eq!(row, [(1, 1.0), (2, 0.0)]);
        let p4 = fam(GraphFamily::Path(4));
        let row = next_step(&p4, 1, &VertexSet::from_iter(4, [1, 2, 3]), 0.25).unwrap();
        assert_eq!(row, [(0, 1.0), (2, 0.0)]);
    }

    #[test]
    fn infeasible_sets() {
        let p4 = fam(GraphFamily::Path(4));
        let x = VertexSet::from_iter(4, [0, 2]);
        assert!(matches!(cost_decision(&p4, 0, &x, 10.0, 0.5), Err(Error::Infeasible(_))));
        assert!(matches!(
            cost_decision(&p4, 3, &VertexSet::singleton(4, 0), 10.0, 0.5),
            Err(Error::Infeasible(_))
        ));
        let big = fam(GraphFamily::Path(21));
        assert_eq!(
            optimal_cover_policy(&big, 0, 0.5),
            Err(Error::TooManyVertices { n: 21, cap: 20 })
        );
    }
}
