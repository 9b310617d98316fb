//! Finite Markov chains on graphs: kernels, stationary vectors, mixing and
//! spectral quantities, and simple-random-walk hitting times.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, VertexSet};
use crate::linalg;
use crate::math::{ceil, ln, sqrt};
use crate::{Error, Result};

const ROW_TOL: f64 = 1e-12;
const MIX_ITERATION_LIMIT: usize = 1_000_000;

/// Row-stochastic matrix over the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    n: usize,
    data: Vec<f64>,
    lazy: bool,
}

impl TransitionKernel {
    /// Wraps a row-major matrix after checking that every row is a
    /// probability vector to within `1e-12`.
    pub fn new(n: usize, data: Vec<f64>, lazy: bool) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "kernel buffer of length {} for {n} states",
                data.len()
            )));
        }
        for x in 0..n {
            let row = &data[x * n..(x + 1) * n];
            let sum: f64 = row.iter().sum();
            if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) || (sum - 1.0).abs() > ROW_TOL {
                return Err(Error::NotStochastic(x));
            }
        }
        Ok(TransitionKernel { n, data, lazy })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// One step of the chain applied to a row distribution.
    pub fn step(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (x, &mass) in dist.iter().enumerate() {
            if mass != 0.0 {
                for (o, &p) in out.iter_mut().zip(self.row(x)) {
                    *o += mass * p;
                }
            }
        }
        out
    }

    /// Whether every positive off-diagonal entry is an arc of `g`; diagonal
    /// entries are allowed only for lazy kernels.
    pub fn supported_on(&self, g: &Graph) -> Result<()> {
        for x in 0..self.n {
            for y in 0..self.n {
                let p = self.get(x, y);
                if p > 0.0 && !(g.has_edge(x, y) || (x == y && self.lazy)) {
                    return Err(Error::SupportViolation { row: x, col: y });
                }
            }
        }
        Ok(())
    }

    fn support_irreducible(&self) -> bool {
        let n = self.n;
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    let p = if forward { self.get(x, y) } else { self.get(y, x) };
                    if p > 0.0 && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        n > 0 && reach(true) && reach(false)
    }
}

/// Simple random walk: each out-edge is taken with probability proportional
/// to its weight.
pub fn srw_kernel(g: &Graph) -> Result<TransitionKernel> {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        if g.degree(x) == 0 {
            return Err(Error::Sink(x));
        }
        let total = g.weighted_degree(x);
        for (i, &y) in g.neighbours(x).iter().enumerate() {
            data[x * n + y] = g.weight_at(x, i) / total;
        }
    }
    TransitionKernel::new(n, data, false)
}

/// `(I + K) / 2`.
pub fn lazy_kernel(k: &TransitionKernel) -> TransitionKernel {
    let n = k.n;
    let mut data: Vec<f64> = k.data.iter().map(|p| p / 2.0).collect();
    for x in 0..n {
        data[x * n + x] += 0.5;
    }
    TransitionKernel { n, data, lazy: true }
}

/// Unique stationary distribution of an irreducible kernel, from the linear
/// system `(K^T - I) pi = 0` with one equation replaced by `sum(pi) = 1`.
pub fn stationary(k: &TransitionKernel) -> Result<Vec<f64>> {
    let n = k.n;
    if !k.support_irreducible() {
        return Err(Error::Reducible);
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = k.get(j, i) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1) * n + j] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let mut pi = linalg::solve(n, &a, &b)?;
    for p in &mut pi {
        *p = p.max(0.0);
    }
    let total: f64 = pi.iter().sum();
    for p in &mut pi {
        *p /= total;
    }
    Ok(pi)
}

/// Spectral and mixing quantities of the simple random walk on an
/// undirected graph. Mixing times refer to the lazy walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProfile {
    /// Largest absolute value among the non-trivial eigenvalues of the SRW.
    pub lambda_star: f64,
    /// Second eigenvalue of the lazy walk, `(1 + lambda_2) / 2`.
    pub lambda2_lazy: f64,
    pub t_rel: f64,
    /// First `t` with worst-case total variation distance at most 1/4.
    pub t_mix: usize,
    /// First `t` with `max_{x,y} (1 - p_t(x,y)/pi(y)) < 1/e`.
    pub t_sep: usize,
    /// First `t` with `max_{x,y} |p_t(x,y)/pi(y) - 1| < 1/e`.
    pub t_inf: usize,
}

pub fn spectral_profile(g: &Graph) -> Result<SpectralProfile> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("spectral profile needs at least two vertices".into()));
    }
    if !g.is_irreducible() {
        return Err(Error::Disconnected);
    }
    let p = srw_kernel(g)?;
    let deg: Vec<f64> = (0..n).map(|v| g.weighted_degree(v)).collect();
    let mut sym = vec![0.0; n * n];
    for x in 0..n {
        for (i, &y) in g.neighbours(x).iter().enumerate() {
            sym[x * n + y] = g.weight_at(x, i) / sqrt(deg[x] * deg[y]);
        }
    }
    let eig = linalg::symmetric_eigenvalues(n, &sym);
    let lambda2 = eig[1];
    let lambda_star = eig[1..].iter().fold(0.0f64, |m, v| m.max(v.abs())).min(1.0);
    let lambda2_lazy = (1.0 + lambda2) / 2.0;
    let t_rel = 1.0 / (1.0 - lambda2_lazy);

    let pi = stationary(&p)?;
    let lazy = lazy_kernel(&p);
    let threshold = 1.0 / crate::math::exp(1.0);
    let mut power: Vec<f64> = (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect();
    let (mut t_mix, mut t_sep, mut t_inf) = (None, None, None);
    for t in 0..=MIX_ITERATION_LIMIT {
        let mut tv = 0.0f64;
        let mut sep = 0.0f64;
        let mut inf = 0.0f64;
        for x in 0..n {
            let row = &power[x * n..(x + 1) * n];
            let mut d = 0.0;
            for y in 0..n {
                let ratio = row[y] / pi[y];
                d += (row[y] - pi[y]).abs();
                sep = sep.max(1.0 - ratio);
                inf = inf.max((ratio - 1.0).abs());
            }
            tv = tv.max(d / 2.0);
        }
        if t_mix.is_none() && t >= 1 && tv <= 0.25 {
            t_mix = Some(t);
        }
        if t_sep.is_none() && sep < threshold {
            t_sep = Some(t);
        }
        if t_inf.is_none() && inf < threshold {
            t_inf = Some(t);
        }
        if let (Some(t_mix), Some(t_sep), Some(t_inf)) = (t_mix, t_sep, t_inf) {
            return Ok(SpectralProfile { lambda_star, lambda2_lazy, t_rel, t_mix, t_sep, t_inf });
        }
        power = mat_mul(n, &power, lazy.as_slice());
    }
    Err(Error::NoConvergence("lazy walk mixing"))
}

fn mat_mul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}

/// Expected hitting times of `target` under the kernel `k`, where `g`
/// supplies reachability. Zero on the target.
pub fn hitting_times(g: &Graph, k: &TransitionKernel, target: &VertexSet) -> Result<Vec<f64>> {
    let n = g.n();
    if target.is_empty() {
        return Err(Error::Empty);
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
    let m = free.len();
    let mut a = vec![0.0; m * m];
    for (i, &x) in free.iter().enumerate() {
        a[i * m + i] += 1.0;
        for (y, &p) in k.row(x).iter().enumerate() {
            if p != 0.0 && index[y] != usize::MAX {
                a[i * m + index[y]] -= p;
            }
        }
    }
    let h = linalg::solve(m, &a, &vec![1.0; m])?;
    let mut out = vec![0.0; n];
    for (i, &v) in free.iter().enumerate() {
        out[v] = h[i];
    }
    Ok(out)
}

/// Simple-random-walk hitting times of `target`.
pub fn hitting_times_srw(g: &Graph, target: &VertexSet) -> Result<Vec<f64>> {
    hitting_times(g, &srw_kernel(g)?, target)
}

/// `t_hit(G)`: the largest SRW hitting time over ordered vertex pairs.
pub fn srw_hit_time_max(g: &Graph) -> Result<f64> {
    let n = g.n();
    let p = srw_kernel(g)?;
    let mut best = 0.0f64;
    for y in 0..n {
        let h = hitting_times(g, &p, &VertexSet::singleton(n, y))?;
        best = h.iter().fold(best, |m, &v| m.max(v));
    }
    Ok(best)
}

/// `ceil(4 t_rel ln n)`, the window of the lazy-convergence bound.
pub fn lazyconv_window(g: &Graph) -> Result<usize> {
    if g.n() < 2 {
        return Ok(0);
    }
    let prof = spectral_profile(g)?;
    Ok(ceil(4.0 * prof.t_rel * ln(g.n() as f64)) as usize)
}

/// Smallest `t` within the window at which the lazy walk from `x` sits in
/// `s` with probability at least `pi(S)/3`; `ok` is false when no such `t`
/// exists.
pub fn lazyconv_check(g: &Graph, x: usize, s: &VertexSet) -> Result<(usize, bool)> {
    let n = g.n();
    if x >= n {
        return Err(Error::VertexOutOfRange { vertex: x, n });
    }
    let window = lazyconv_window(g)?;
    let p = srw_kernel(g)?;
    let pi = stationary(&p)?;
    let lazy = lazy_kernel(&p);
    let goal = s.iter().map(|v| pi[v]).sum::<f64>() / 3.0;
    let mut dist = vec![0.0; n];
    dist[x] = 1.0;
    for t in 0..=window {
        if s.iter().map(|v| dist[v]).sum::<f64>() >= goal {
            return Ok((t, true));
        }
        dist = lazy.step(&dist);
    }
    Ok((window, false))
}

/// Outcome of checking the lazy-convergence bound for every start vertex
/// and every nonempty target set of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct LazyConvAudit {
    pub window: usize,
    pub pairs_checked: usize,
    /// Counterexamples as `(x, S)` with `S` a bit mask.
    pub failures: Vec<(usize, u64)>,
    /// Largest first-success time; equal to the window when a pair fails.
    pub worst_t: usize,
}

/// Exhaustive version of [`lazyconv_check`] for graphs with at most 20
/// vertices. Subset masses are accumulated incrementally so each pair costs
/// O(1) per time step.
pub fn lazyconv_audit(g: &Graph) -> Result<LazyConvAudit> {
    let n = g.n();
    if n > 20 {
        return Err(Error::TooManyVertices { n, cap: 20 });
    }
    if n == 1 {
        // The walk sits in the only nonempty set from time 0.
        return Ok(LazyConvAudit { window: 0, pairs_checked: 1, failures: Vec::new(), worst_t: 0 });
    }
    let window = lazyconv_window(g)?;
    let p = srw_kernel(g)?;
    let pi = stationary(&p)?;
    let lazy = lazy_kernel(&p);
    let full = 1usize << n;
    let subset_sums = |w: &[f64]| {
        let mut s = vec![0.0; full];
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            s[mask] = s[mask & (mask - 1)] + w[low];
        }
        s
    };
    let goal: Vec<f64> = subset_sums(&pi).into_iter().map(|m| m / 3.0).collect();
    let mut failures = Vec::new();
    let mut worst_t = 0;
    for x in 0..n {
        let mut pending: Vec<usize> = (1..full).collect();
        let mut dist = vec![0.0; n];
        dist[x] = 1.0;
        for t in 0..=window {
            let mass = subset_sums(&dist);
            pending.retain(|&s| mass[s] < goal[s]);
            if pending.is_empty() {
                worst_t = worst_t.max(t);
                break;
            }
            if t == window {
                failures.extend(pending.iter().map(|&s| (x, s as u64)));
                worst_t = worst_t.max(t);
            }
            dist = lazy.step(&dist);
        }
    }
    Ok(LazyConvAudit { window, pairs_checked: n * (full - 1), failures, worst_t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    fn path(n: usize) -> Graph {
        generate(&GraphFamily::Path(n)).unwrap()
    }

    #[test]
    fn srw_rows() {
        let p = srw_kernel(&path(3)).unwrap();
        assert_eq!(p.row(1), [0.5, 0.0, 0.5]);
        let k2 = srw_kernel(&path(2)).unwrap();
        assert_eq!(k2.as_slice(), [0.0, 1.0, 1.0, 0.0]);
        let w = Graph::with_weights(3, false, &[(1, 0), (1, 2)], &[2.0, 1.0]).unwrap();
        let row = srw_kernel(&w).unwrap().row(1).to_vec();
        assert!((row[0] - 2.0 / 3.0).abs() < 1e-15 && (row[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sink_is_rejected() {
        let g = Graph::new(2, true, &[(0, 1)]).unwrap();
        assert_eq!(srw_kernel(&g), Err(Error::Sink(1)));
    }

    #[test]
    fn lazy_examples() {
        let lazy = lazy_kernel(&srw_kernel(&path(2)).unwrap());
        assert_eq!(lazy.as_slice(), [0.5, 0.5, 0.5, 0.5]);
        let id = TransitionKernel::new(2, vec![1.0, 0.0, 0.0, 1.0], false).unwrap();
        assert_eq!(lazy_kernel(&id).as_slice(), id.as_slice());
    }

    #[test]
    fn stationary_examples() {
        let pi = stationary(&srw_kernel(&path(3)).unwrap()).unwrap();
        for (a, b) in pi.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        let p4 = srw_kernel(&path(4)).unwrap();
        let a = stationary(&p4).unwrap();
        let b = stationary(&lazy_kernel(&p4)).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        let id = TransitionKernel::new(2, vec![1.0, 0.0, 0.0, 1.0], false).unwrap();
        assert_eq!(stationary(&id), Err(Error::Reducible));
    }

    #[test]
    fn complete_graph_spectrum() {
        let k4 = spectral_profile(&generate(&GraphFamily::Complete(4)).unwrap()).unwrap();
        assert!((k4.t_rel - 1.5).abs() < 1e-10);
        assert!((k4.lambda_star - 1.0 / 3.0).abs() < 1e-10);
        let k2 = spectral_profile(&path(2)).unwrap();
        assert_eq!(k2.t_mix, 1);
        assert_eq!(k2.lambda_star, 1.0);
    }

    #[test]
    fn spectral_rejects_bad_input() {
        let two = Graph::new(2, false, &[]).unwrap();
        assert_eq!(spectral_profile(&two), Err(Error::Disconnected));
        let d = Graph::new(2, true, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(spectral_profile(&d), Err(Error::Directed));
    }

    #[test]
    fn hitting_examples() {
        let n = 3;
        let h = hitting_times_srw(&path(3), &VertexSet::singleton(n, 2)).unwrap();
        assert!((h[0] - 4.0).abs() < 1e-12 && (h[1] - 3.0).abs() < 1e-12 && h[2] == 0.0);
        let h2 = hitting_times_srw(&path(2), &VertexSet::singleton(2, 1)).unwrap();
        assert!((h2[0] - 1.0).abs() < 1e-12);
        let split = Graph::new(3, false, &[(0, 1)]).unwrap();
        assert_eq!(
            hitting_times_srw(&split, &VertexSet::singleton(3, 0)),
            Err(Error::Sink(2))
        );
    }

    #[test]
    fn lazyconv_examples() {
        let (t, ok) = lazyconv_check(&path(2), 0, &VertexSet::singleton(2, 1)).unwrap();
        assert_eq!((t, ok), (1, true));
        let g = path(3);
        let (t, ok) = lazyconv_check(&g, 0, &VertexSet::full(3)).unwrap();
        assert_eq!((t, ok), (0, true));
        let (t, ok) = lazyconv_check(&g, 0, &VertexSet::singleton(3, 2)).unwrap();
        assert!(ok && t <= lazyconv_window(&g).unwrap());
    }

    #[test]
    fn audit_agrees_with_pointwise_check() {
        let g = generate(&GraphFamily::Cycle(5)).unwrap();
        let audit = lazyconv_audit(&g).unwrap();
        assert!(audit.failures.is_empty());
        let mut worst = 0;
        for x in 0..5 {
            for mask in 1u64..32 {
                let (t, ok) = lazyconv_check(&g, x, &VertexSet::from_mask(5, mask)).unwrap();
                assert!(ok);
                worst = worst.max(t);
            }
        }
        assert_eq!(worst, audit.worst_t);
    }
}
