use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::mdp::{FirstPassage, Sense, Succ};
use crate::bias::{brw_kernel, BiasMatrix};
use crate::chain::{spectral_profile, srw_hit_time_max, srw_kernel, stationary};
use crate::graph::{Graph, VertexSet};
use crate::math::{ln, powf};
use crate::{Error, Result};

/// Optimal unchanging strategy for hitting a target set.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingPolicy {
    /// Preferred out-neighbour of every vertex off the target.
    pub choice: Vec<Option<usize>>,
    /// Expected hitting times; zero on the target.
    pub values: Vec<f64>,
}

impl HittingPolicy {
    pub fn bias_matrix(&self, g: &Graph) -> Result<BiasMatrix> {
        BiasMatrix::point_masses(g, &self.choice)
    }
}

/// First-passage problem for hitting `target`; returns the problem and the
/// vertex behind each interior state.
fn hitting_problem(g: &Graph, target: &VertexSet, sense: Sense) -> Result<(FirstPassage, Vec<usize>)> {
    let n = g.n();
    if target.is_empty() {
        return Err(Error::Empty);
    }
    if target.capacity() != n {
        return Err(Error::InvalidParameter(format!(
            "target set over {} vertices for a graph on {n}",
            target.capacity()
        )));
    }
    let reach = g.can_reach(target);
    if let Some(v) = (0..n).find(|&v| !reach.contains(v)) {
        return Err(Error::Unreachable(v));
    }
    let free: Vec<usize> = (0..n).filter(|&v| !target.contains(v)).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let succ = free
        .iter()
        .map(|&v| {
            g.neighbours(v)
                .iter()
                .map(|&y| if target.contains(y) { Succ::Fixed(0.0) } else { Succ::State(index[y]) })
                .collect()
        })
        .collect();
    Ok((FirstPassage { succ, step_cost: 1.0, sense }, free))
}

/// Minimises expected hitting times of `target` over all strategies; the
/// optimum is attained by an unchanging deterministic one.
pub fn optimal_hitting_policy(g: &Graph, target: &VertexSet, eps: f64) -> Result<HittingPolicy> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("bias {eps} outside [0,1]")));
    }
    let n = g.n();
    let (mdp, free) = hitting_problem(g, target, Sense::Minimize)?;
    let sol = mdp.solve(eps, mdp.srw_greedy()?)?;
    let mut values = vec![0.0; n];
    let mut choice = vec![None; n];
    for (i, &v) in free.iter().enumerate() {
        values[v] = sol.values[i];
        choice[v] = Some(g.neighbours(v)[sol.policy[i]]);
    }
    Ok(HittingPolicy { choice, values })
}

/// Largest stationary probability of `v` over unchanging ε-biased strategies,
/// with a strategy attaining it. The stationary mass is the reciprocal of
/// the expected return time; away from `v` the strategy is the optimal
/// hitting policy, and at `v` it points to the neighbour closest to `v` in
/// expected hitting time.
pub fn max_stationary(g: &Graph, v: usize, eps: f64) -> Result<(f64, BiasMatrix)> {
    let n = g.n();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if !g.is_irreducible() {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Err(Error::InvalidParameter("single-vertex graph has no return walk".into()));
    }
    let mut policy = optimal_hitting_policy(g, &VertexSet::singleton(n, v), eps)?;
    let nb = g.neighbours(v);
    let hs: Vec<f64> = nb.iter().map(|&y| policy.values[y]).collect();
    let mut best = 0;
    for k in 1..hs.len() {
        if hs[k] < hs[best] - 1e-12 * 1.0f64.max(hs[best]) {
            best = k;
        }
    }
    let mean = hs.iter().sum::<f64>() / hs.len() as f64;
    let ret = 1.0 + (1.0 - eps) * mean + eps * hs[best];
    policy.choice[v] = Some(nb[best]);
    Ok((1.0 / ret, policy.bias_matrix(g)?))
}

/// Outcome of comparing the optimal stationary mass with `p^(1-ε+δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzarCheck {
    pub delta: f64,
    /// Stationary probability `p` of the vertex under the simple walk.
    pub pi: f64,
    pub pi_q: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `max π_Q(v) ≥ p^(1-ε+δ)` with `δ = ln(16 t_mix)/|ln p|`.
pub fn azarconj_check(g: &Graph, v: usize, eps: f64) -> Result<AzarCheck> {
    let prof = spectral_profile(g)?;
    let pi = stationary(&srw_kernel(g)?)?[v];
    if pi >= 1.0 {
        return Err(Error::InvalidParameter("vertex carries all stationary mass".into()));
    }
    let delta = ln(16.0 * prof.t_mix as f64) / ln(pi).abs();
    let bound = powf(pi, 1.0 - eps + delta);
    let (pi_q, _) = max_stationary(g, v, eps)?;
    Ok(AzarCheck { delta, pi, pi_q, bound, holds: pi_q >= bound * (1.0 - 1e-12) })
}

/// Leaving-time bound evaluated at one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairBound {
    pub x: usize,
    pub y: usize,
    /// Optimal ε-biased expected hitting time of `y` from `x`.
    pub hitting: f64,
    /// `16 π(y)^(ε-1) t_mix`.
    pub stationary_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub eps: f64,
    pub t_mix: usize,
    pub t_rel: f64,
    /// Largest SRW hitting time over ordered pairs.
    pub t_hit: f64,
    pub pairs: Vec<PairBound>,
    /// Largest optimal biased hitting time over ordered pairs.
    pub biased_t_hit: f64,
    /// `120 (n d_avg / d_min)^(1-ε) t_mix^((2+ε)/3)`.
    pub uniform_bound: f64,
    /// `(t_hit / ε) ln(d_avg t_rel ln n / d_min)`, reported without its
    /// unknown constant; infinite at `ε = 0`.
    pub cover_bracket: f64,
    pub pairwise_holds: bool,
    pub uniform_holds: bool,
}

/// Evaluates the leaving-time bounds against exact optimal hitting times on
/// every ordered pair.
pub fn bound_report(g: &Graph, eps: f64) -> Result<BoundReport> {
    let n = g.n();
    let prof = spectral_profile(g)?;
    let pi = stationary(&srw_kernel(g)?)?;
    let stats = g.degree_stats();
    let t_mix = prof.t_mix as f64;
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for y in 0..n {
        let h = optimal_hitting_policy(g, &VertexSet::singleton(n, y), eps)?.values;
        let bound = 16.0 * powf(pi[y], eps - 1.0) * t_mix;
        for x in (0..n).filter(|&x| x != y) {
            pairs.push(PairBound { x, y, hitting: h[x], stationary_bound: bound });
        }
    }
    let biased_t_hit = pairs.iter().fold(0.0f64, |m, p| m.max(p.hitting));
    let ratio = n as f64 * stats.d_avg / stats.d_min as f64;
    let uniform_bound = 120.0 * powf(ratio, 1.0 - eps) * powf(t_mix, (2.0 + eps) / 3.0);
    let t_hit = srw_hit_time_max(g)?;
    let log_term = ln(stats.d_avg * prof.t_rel * ln(n as f64) / stats.d_min as f64);
    let cover_bracket = if eps == 0.0 { f64::INFINITY } else { t_hit / eps * log_term };
    let pairwise_holds = pairs.iter().all(|p| p.hitting <= p.stationary_bound);
    Ok(BoundReport {
        eps,
        t_mix: prof.t_mix,
        t_rel: prof.t_rel,
        t_hit,
        pairs,
        biased_t_hit,
        uniform_bound,
        cover_bracket,
        pairwise_holds,
        uniform_holds: biased_t_hit <= uniform_bound,
    })
}

/// Stationary distribution of the ε-biased walk with bias matrix `b`.
pub fn biased_stationary(g: &Graph, eps: f64, b: &BiasMatrix) -> Result<Vec<f64>> {
    stationary(&brw_kernel(g, eps, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn fam(f: GraphFamily) -> Graph {
        generate(&f).unwrap()
    }

    #[test]
    fn hitting_examples() {
        let k2 = fam(GraphFamily::Path(2));
        for eps in [0.0, 0.3, 1.0] {
            let h = optimal_hitting_policy(&k2, &VertexSet::singleton(2, 1), eps).unwrap();
            assert!((h.values[0] - 1.0).abs() < 1e-12);
        }
        let p3 = fam(GraphFamily::Path(3));
        let t = VertexSet::singleton(3, 2);
        let h = optimal_hitting_policy(&p3, &t, 0.5).unwrap();
        assert!((h.values[0] - 8.0 / 3.0).abs() < 1e-12 && (h.values[1] - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(h.choice, [Some(1), Some(2), None]);
        let h0 = optimal_hitting_policy(&p3, &t, 0.0).unwrap();
        assert!((h0.values[0] - 4.0).abs() < 1e-12 && (h0.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_target() {
        let g = Graph::new(3, true, &[(0, 1), (1, 0), (2, 0)]).unwrap();
        assert_eq!(
            optimal_hitting_policy(&g, &VertexSet::singleton(3, 2), 0.5),
            Err(Error::Unreachable(0))
        );
    }

    #[test]
    fn stationary_examples() {
        let k2 = fam(GraphFamily::Path(2));
        for eps in [0.0, 0.25, 0.5, 1.0] {
            assert_eq!(max_stationary(&k2, 0, eps).unwrap().0, 0.5);
        }
        // A failed attempt from the centre costs two steps, so the return
        // time to a leaf is 1 + 2 = 3 at ε = 1/2.
        let star = fam(GraphFamily::Star { leaves: 3 });
        let (pq, b) = max_stationary(&star, 1, 0.5).unwrap();
        assert!((pq - 1.0 / 3.0).abs() < 1e-12);
        let pi = biased_stationary(&star, 0.5, &b).unwrap();
        assert!((pi[1] - pq).abs() < 1e-12);
        let p5 = fam(GraphFamily::Path(5));
        let (pq, _) = max_stationary(&p5, 2, 0.0).unwrap();
        assert!((pq - 0.25).abs() < 1e-12);
    }

    #[test]
    fn azar_examples() {
        let k2 = fam(GraphFamily::Path(2));
        let c = azarconj_check(&k2, 0, 0.5).unwrap();
        assert!((c.delta - 4.0).abs() < 1e-12 && c.holds);
        let pet = fam(GraphFamily::Petersen);
        assert!(azarconj_check(&pet, 3, 0.5).unwrap().holds);
        assert!(azarconj_check(&pet, 3, 0.0).unwrap().holds);
    }

    #[test]
    fn bound_examples() {
        let r = bound_report(&fam(GraphFamily::Path(2)), 0.5).unwrap();
        assert!((r.pairs[0].stationary_bound - 16.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((r.pairs[0].hitting - 1.0).abs() < 1e-12);
        let r = bound_report(&fam(GraphFamily::Path(3)), 0.25).unwrap();
        assert_eq!(r.pairs.len(), 6);
        assert!(r.pairwise_holds && r.uniform_holds);
        let r = bound_report(&fam(GraphFamily::Path(3)), 1.0).unwrap();
        assert!(r.pairs.iter().all(|p| (p.stationary_bound - 16.0 * r.t_mix as f64).abs() < 1e-9));
    }
}
