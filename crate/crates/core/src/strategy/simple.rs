//! Chains that stay within constant factors of the simple random walk.

use alloc::format;
use alloc::vec::Vec;

use super::hitting::max_stationary;
use crate::chain::{spectral_profile, srw_kernel, stationary, TransitionKernel};
use crate::graph::Graph;
use crate::math::{ln, powf};
use crate::{Error, Result};

/// Constants with `c/d(u) ≤ q(u,v) ≤ C/d(u)` on every edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleWalkBounds {
    pub c: f64,
    pub big_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sandwich {
    pub bounds: SimpleWalkBounds,
    pub tau1: f64,
    pub tau2: f64,
    pub pi_q: Vec<f64>,
    /// `c^τ₁ π / 2`.
    pub lower: Vec<f64>,
    /// `2 C^τ₂ π`.
    pub upper: Vec<f64>,
    pub holds: bool,
}

/// Tightest `(c, C)` for `k` on `g` and the resulting stationary sandwich,
/// with `τ₁ = min(t_sep, 3 ln n/|ln λ*|)` and `τ₂ = min(t_∞, 3 ln n/|ln λ*|)`.
pub fn simple_walk_sandwich(g: &Graph, k: &TransitionKernel) -> Result<Sandwich> {
    let n = g.n();
    if k.n() != n {
        return Err(Error::InvalidParameter("kernel size differs from graph".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if k.get(x, y) > 0.0 && !g.has_edge(x, y) {
                return Err(Error::SupportViolation { row: x, col: y });
            }
        }
    }
    let mut c = f64::INFINITY;
    let mut big_c = 0.0f64;
    for x in 0..n {
        let d = g.degree(x) as f64;
        for &y in g.neighbours(x) {
            let scaled = k.get(x, y) * d;
            c = c.min(scaled);
            big_c = big_c.max(scaled);
        }
    }
    if !(c > 0.0) {
        return Err(Error::Hypothesis("kernel vanishes on an edge, so it is not a simple walk".into()));
    }
    let prof = spectral_profile(g)?;
    let spectral = if prof.lambda_star >= 1.0 {
        f64::INFINITY
    } else {
        3.0 * ln(n as f64) / ln(prof.lambda_star).abs()
    };
    let tau1 = (prof.t_sep as f64).min(spectral);
    let tau2 = (prof.t_inf as f64).min(spectral);
    let pi = stationary(&srw_kernel(g)?)?;
    let pi_q = stationary(k)?;
    let lo = powf(c, tau1) / 2.0;
    let hi = 2.0 * powf(big_c, tau2);
    let lower: Vec<f64> = pi.iter().map(|p| lo * p).collect();
    let upper: Vec<f64> = pi.iter().map(|p| hi * p).collect();
    let slack = 1e-12;
    let holds = (0..n).all(|x| lower[x] <= pi_q[x] + slack && pi_q[x] <= upper[x] + slack);
    Ok(Sandwich { bounds: SimpleWalkBounds { c, big_c }, tau1, tau2, pi_q, lower, upper, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseCheck {
    pub eps: f64,
    /// `(1+β) α⁻²`.
    pub factor: f64,
    /// Largest `max π_Q(u) / π(u)` over vertices.
    pub worst_ratio: f64,
    pub holds: bool,
}

/// Checks that with `ε = β/n` no vertex's stationary mass grows by more than
/// `(1+β)α⁻²` on a graph with `d_min ≥ αn`.
pub fn dense_no_boost_check(g: &Graph, alpha: f64, beta: f64) -> Result<DenseCheck> {
    let n = g.n();
    let stats = g.degree_stats();
    if !(alpha > 0.0) || (stats.d_min as f64) < alpha * n as f64 * (1.0 - 1e-12) {
        return Err(Error::Hypothesis(format!(
            "minimum degree {} is below {alpha} * {n}",
            stats.d_min
        )));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("beta {beta} must be nonnegative")));
    }
    let eps = beta / n as f64;
    if eps > 1.0 {
        return Err(Error::InvalidParameter(format!("bias beta/n = {eps} exceeds 1")));
    }
    let factor = (1.0 + beta) / (alpha * alpha);
    let pi = stationary(&srw_kernel(g)?)?;
    let mut worst_ratio = 0.0f64;
    for u in 0..n {
        let (pq, _) = max_stationary(g, u, eps)?;
        worst_ratio = worst_ratio.max(pq / pi[u]);
    }
    Ok(DenseCheck { eps, factor, worst_ratio, holds: worst_ratio <= factor * (1.0 + 1e-12) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::{brw_kernel, BiasMatrix};
    use crate::graph::{generate, GraphFamily};

    #[test]
    fn srw_is_one_one_simple() {
        let g = generate(&GraphFamily::Cycle(5)).unwrap();
        let s = simple_walk_sandwich(&g, &srw_kernel(&g).unwrap()).unwrap();
        assert_eq!(s.bounds, SimpleWalkBounds { c: 1.0, big_c: 1.0 });
        assert!(s.holds);
    }

    #[test]
    fn two_vertex_walk_is_forced() {
        let g = generate(&GraphFamily::Path(2)).unwrap();
        let b = BiasMatrix::uniform(&g).unwrap();
        let s = simple_walk_sandwich(&g, &brw_kernel(&g, 0.3, &b).unwrap()).unwrap();
        assert_eq!(s.bounds, SimpleWalkBounds { c: 1.0, big_c: 1.0 });
        assert!(s.holds && s.tau1.is_finite());
    }

    #[test]
    fn complete_graph_point_masses() {
        let g = generate(&GraphFamily::Complete(4)).unwrap();
        let b = BiasMatrix::point_masses(&g, &[Some(1), Some(2), Some(3), Some(0)]).unwrap();
        let s = simple_walk_sandwich(&g, &brw_kernel(&g, 0.25, &b).unwrap()).unwrap();
        assert!((s.bounds.c - 0.75).abs() < 1e-12 && (s.bounds.big_c - 1.5).abs() < 1e-12);
        assert!(s.holds);
    }

    #[test]
    fn dense_examples() {
        let k4 = generate(&GraphFamily::Complete(4)).unwrap();
        let r = dense_no_boost_check(&k4, 0.75, 1.0).unwrap();
        assert!((r.factor - 32.0 / 9.0).abs() < 1e-12 && r.holds);
        let k2 = generate(&GraphFamily::Path(2)).unwrap();
        let r = dense_no_boost_check(&k2, 0.5, 0.0).unwrap();
        assert!((r.worst_ratio - 1.0).abs() < 1e-12 && r.holds);
        let k44 = generate(&GraphFamily::CompleteBipartite(4, 4)).unwrap();
        assert!(dense_no_boost_check(&k44, 0.5, 1.0).unwrap().holds);
        assert!(matches!(dense_no_boost_check(&k44, 0.75, 1.0), Err(Error::Hypothesis(_))));
    }
}
