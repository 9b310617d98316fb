//! Distance-based edge weights anchored at a vertex, and their emulation by
//! an ε-biased controller.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bias::{brw_kernel, BiasMatrix};
use crate::chain::{srw_kernel, stationary, TransitionKernel};
use crate::graph::Graph;
use crate::math::{ln, powf, powi};
use crate::{Error, Result};

const RATIO_TOL: f64 = 1e-12;

/// Weights `w(r,s) = (1+a)^max(d(u,r), d(u,s))` for an anchor `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    pub anchor: usize,
    pub a: f64,
    /// Edge weights in the order of [`Graph::edges`].
    pub weights: Vec<f64>,
    pub total: f64,
}

impl WeightScheme {
    pub fn new(g: &Graph, anchor: usize, a: f64) -> Result<Self> {
        if g.is_directed() {
            return Err(Error::Directed);
        }
        if anchor >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: anchor, n: g.n() });
        }
        if !(a > -1.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight parameter {a} must exceed -1")));
        }
        let dist = g.bfs_distances(anchor);
        let mut weights = Vec::new();
        for (r, s) in g.edges() {
            let (Some(dr), Some(ds)) = (dist[r], dist[s]) else {
                return Err(Error::Disconnected);
            };
            weights.push(powi(1.0 + a, dr.max(ds) as i32));
        }
        if dist.iter().any(Option::is_none) {
            return Err(Error::Disconnected);
        }
        let total = weights.iter().sum();
        Ok(WeightScheme { anchor, a, weights, total })
    }

    /// `g` carrying the scheme's weights.
    pub fn weighted_graph(&self, g: &Graph) -> Result<Graph> {
        let mut w = Graph::with_weights(g.n(), false, &g.edges(), &self.weights)?;
        for (name, &v) in g.labels() {
            w.set_label(name.clone(), v)?;
        }
        Ok(w)
    }

    /// `π(x) = Σ_{y~x} w(y,x) / (2W)`.
    pub fn closed_form_stationary(&self, g: &Graph) -> Vec<f64> {
        let mut pi = vec![0.0; g.n()];
        for ((r, s), w) in g.edges().into_iter().zip(&self.weights) {
            pi[r] += w / (2.0 * self.total);
            pi[s] += w / (2.0 * self.total);
        }
        pi
    }

    /// Every two edges sharing an endpoint have weight ratio `1+a`,
    /// `1/(1+a)` or `1`.
    pub fn check_ratio_condition(&self, g: &Graph) -> Result<()> {
        let wg = self.weighted_graph(g)?;
        let r = 1.0 + self.a;
        for x in 0..g.n() {
            let d = wg.degree(x);
            for i in 0..d {
                for j in 0..d {
                    let q = wg.weight_at(x, i) / wg.weight_at(x, j);
                    if ![1.0, r, 1.0 / r].iter().any(|&t| (q - t).abs() <= RATIO_TOL * t.max(1.0)) {
                        return Err(Error::RatioCondition(x));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Walk that leaves each vertex along an edge chosen proportionally to its
/// scheme weight.
pub fn weighted_walk_kernel(g: &Graph, scheme: &WeightScheme) -> Result<TransitionKernel> {
    srw_kernel(&scheme.weighted_graph(g)?)
}

/// Smallest bias that can emulate the weighted walk: `a/(1+a)` for `a > 0`
/// and `-a` otherwise.
pub fn emulation_threshold(a: f64) -> f64 {
    if a > 0.0 {
        a / (1.0 + a)
    } else {
        -a
    }
}

/// Bias matrix under which the ε-biased walk equals the weighted walk.
///
/// At a vertex of degree `d` whose `k` heavy edges are `1+a'` times heavier
/// than the rest (`a' = a` for `a > 0`, `a' = -a/(1+a)` otherwise) the
/// threshold bias row puts `(d a' + 2d - k)/(d a' k + d²)` on each heavy edge
/// and `(d - k)/(d a' k + d²)` on each light one. Above the threshold the row
/// is mixed with the uniform row so the combined walk is unchanged.
pub fn emulate_weights(g: &Graph, scheme: &WeightScheme, eps: f64) -> Result<BiasMatrix> {
    let e0 = emulation_threshold(scheme.a);
    if eps < e0 - 1e-15 || eps > 1.0 {
        return Err(Error::BelowThreshold { eps, required: e0 });
    }
    scheme.check_ratio_condition(g)?;
    let wg = scheme.weighted_graph(g)?;
    let n = g.n();
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        let nb = wg.neighbours(x);
        let d = nb.len();
        if d == 0 {
            return Err(Error::Sink(x));
        }
        let ws: Vec<f64> = (0..d).map(|i| wg.weight_at(x, i)).collect();
        let wmax = ws.iter().fold(0.0f64, |m, &w| m.max(w));
        let wmin = ws.iter().fold(f64::INFINITY, |m, &w| m.min(w));
        let uniform = 1.0 / d as f64;
        let heavy: Vec<bool> = ws.iter().map(|&w| w > wmin * (1.0 + RATIO_TOL)).collect();
        let k = heavy.iter().filter(|&&h| h).count();
        let mix = if e0 == 0.0 { 0.0 } else { e0 / eps };
        for (i, &y) in nb.iter().enumerate() {
            let row_entry = if k == 0 {
                uniform
            } else {
                let ap = wmax / wmin - 1.0;
                let (df, kf) = (d as f64, k as f64);
                let denom = df * ap * kf + df * df;
                if heavy[i] {
                    (df * ap + 2.0 * df - kf) / denom
                } else {
                    (df - kf) / denom
                }
            };
            data[x * n + y] = mix * row_entry + (1.0 - mix) * uniform;
        }
        let sum: f64 = data[x * n..(x + 1) * n].iter().sum();
        for p in &mut data[x * n..(x + 1) * n] {
            *p /= sum;
        }
    }
    BiasMatrix::new(g, data)
}

/// Stationary boost from the anchored scheme with `a = -ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeBoost {
    /// Stationary mass of the anchor under the weighted walk.
    pub pi_q: f64,
    /// Stationary mass of the anchor under the simple walk.
    pub pi: f64,
    /// `ln(1-ε) ln p / (ln(d_max - 1) ln n)`.
    pub eps_tilde: f64,
    /// `p^(1-ε̃)`.
    pub bound: f64,
    /// Whether the weighted walk's mass reaches the bound. Small graphs can
    /// fail because the exponent is only meaningful asymptotically.
    pub holds: bool,
}

pub fn boost_stationary_scheme(g: &Graph, u: usize, eps: f64) -> Result<SchemeBoost> {
    let stats = g.degree_stats();
    if stats.d_max < 3 {
        return Err(Error::Hypothesis(format!("maximum degree {} is below 3", stats.d_max)));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("bias {eps} outside (0,1)")));
    }
    let scheme = WeightScheme::new(g, u, -eps)?;
    let pi_q = stationary(&weighted_walk_kernel(g, &scheme)?)?[u];
    let pi = stationary(&srw_kernel(g)?)?[u];
    let eps_tilde = ln(1.0 - eps) * ln(pi) / (ln(stats.d_max as f64 - 1.0) * ln(g.n() as f64));
    let bound = powf(pi, 1.0 - eps_tilde);
    Ok(SchemeBoost { pi_q, pi, eps_tilde, bound, holds: pi_q >= bound * (1.0 - 1e-12) })
}

/// Largest entrywise gap between the emulated biased kernel at `eps` and the
/// weighted walk.
pub fn emulation_gap(g: &Graph, scheme: &WeightScheme, eps: f64) -> Result<f64> {
    let b = emulate_weights(g, scheme, eps)?;
    let biased = brw_kernel(g, eps, &b)?;
    let target = weighted_walk_kernel(g, scheme)?;
    Ok(biased
        .as_slice()
        .iter()
        .zip(target.as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    #[test]
    fn uniform_scheme_is_simple_walk() {
        let g = generate(&GraphFamily::Cycle(5)).unwrap();
        let s = WeightScheme::new(&g, 0, 0.0).unwrap();
        assert_eq!(weighted_walk_kernel(&g, &s).unwrap(), srw_kernel(&g).unwrap());
        let b = emulate_weights(&g, &s, 0.0).unwrap();
        assert_eq!(b, BiasMatrix::uniform(&g).unwrap());
    }

    #[test]
    fn petersen_anchor_mass() {
        let g = generate(&GraphFamily::Petersen).unwrap();
        let s = WeightScheme::new(&g, 0, -0.5).unwrap();
        assert!((s.total - 4.5).abs() < 1e-12);
        let pi = stationary(&weighted_walk_kernel(&g, &s).unwrap()).unwrap();
        assert!((pi[0] - 1.0 / 6.0).abs() < 1e-12);
        for (a, b) in pi.iter().zip(s.closed_form_stationary(&g)) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn path_weights() {
        let g = generate(&GraphFamily::Path(3)).unwrap();
        let s = WeightScheme::new(&g, 0, 1.0).unwrap();
        assert_eq!(s.weights, [2.0, 4.0]);
        assert!((s.closed_form_stationary(&g)[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn degree_two_emulation_row() {
        // Vertex 1 of the path 0-1-2 anchored at 0 with a = 1 has one light
        // edge (weight 2, towards the anchor) and one heavy edge (weight 4).
        let g = generate(&GraphFamily::Path(3)).unwrap();
        let s = WeightScheme::new(&g, 0, 1.0).unwrap();
        let b = emulate_weights(&g, &s, 0.5).unwrap();
        assert!((b.get(1, 2) - 5.0 / 6.0).abs() < 1e-15 && (b.get(1, 0) - 1.0 / 6.0).abs() < 1e-15);
        let k = brw_kernel(&g, 0.5, &b).unwrap();
        assert!((k.get(1, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert!(emulation_gap(&g, &s, 0.5).unwrap() < 1e-12);
        assert!(emulation_gap(&g, &s, 0.8).unwrap() < 1e-12);
        assert!(matches!(emulate_weights(&g, &s, 0.4), Err(Error::BelowThreshold { .. })));
    }

    #[test]
    fn negative_parameter_reduces_to_positive() {
        let g = generate(&GraphFamily::Petersen).unwrap();
        let s = WeightScheme::new(&g, 0, -0.5).unwrap();
        assert_eq!(emulation_threshold(-0.5), emulation_threshold(1.0));
        assert!(emulation_gap(&g, &s, 0.5).unwrap() < 1e-12);
    }

    #[test]
    fn scheme_boost_on_petersen() {
        let g = generate(&GraphFamily::Petersen).unwrap();
        let r = boost_stationary_scheme(&g, 0, 0.5).unwrap();
        assert!((r.pi_q - 1.0 / 6.0).abs() < 1e-12 && (r.pi - 0.1).abs() < 1e-12);
        assert!((r.eps_tilde - 1.0).abs() < 1e-12);
        assert!(!r.holds);
        let small = boost_stationary_scheme(&g, 0, 1e-6).unwrap();
        assert!((small.pi_q - 0.1).abs() < 1e-5 && small.eps_tilde < 1e-5);
        let path = generate(&GraphFamily::Path(4)).unwrap();
        assert!(matches!(boost_stationary_scheme(&path, 0, 0.5), Err(Error::Hypothesis(_))));
    }
}
