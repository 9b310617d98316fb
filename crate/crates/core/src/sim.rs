//! Seeded Monte-Carlo simulation of simple, biased and time-biased walks.
//!
//! Every step draws the bias coin first, so runs with the same seed and
//! different strategies share their coin and uniform draws as far as their
//! paths agree. Replicate `r` of a run with master seed `s` uses
//! [`substream(s, r)`](crate::rng::substream).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::bias::{trajectory_boost, BiasMatrix, TrajectoryPredicate, TrajectoryStrategy};
use crate::chain::{lazyconv_window, srw_hit_time_max};
use crate::graph::{Graph, VertexSet};
use crate::math::{ceil, floor, ln, sqrt};
use crate::rng::{substream, ChaCha8Rng};
use crate::strategy::CoverPolicy;
use crate::{Error, Result};

/// Longest walk any simulation may take.
pub const STEP_LIMIT: usize = 10_000_000;
/// Step budget of [`phase_cover_strategy`].
pub const PHASE_STEP_LIMIT: usize = 1_000_000;

/// Who picks the vertex on a biased step.
#[derive(Debug, Clone, Copy)]
pub enum Strategy<'a> {
    /// Biased steps are uniform as well.
    None,
    Bias(&'a BiasMatrix),
    Cover(&'a CoverPolicy),
    Trajectory(&'a TrajectoryStrategy),
}

#[derive(Debug, Clone, Copy)]
pub enum Stop<'a> {
    /// Every vertex visited.
    Cover,
    Hit(&'a VertexSet),
    /// After exactly this many steps.
    Horizon(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub start: usize,
    /// Visited vertices from time 0, starting with `start`.
    pub vertices: Vec<usize>,
    /// Outcome of the bias coin at each step.
    pub biased: Vec<bool>,
    pub seed: u64,
}

impl WalkTrace {
    pub fn steps(&self) -> usize {
        self.biased.len()
    }

    /// Vertices not yet visited after `t` steps.
    pub fn unvisited_after(&self, n: usize, t: usize) -> usize {
        let mut seen = VertexSet::new(n);
        for &v in &self.vertices[..=t.min(self.steps())] {
            seen.insert(v);
        }
        n - seen.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `√replicates`.
    pub se: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        let r = samples.len();
        if r < 2 {
            return Err(Error::InvalidParameter(format!("{r} replicates; at least two are needed")));
        }
        let mean = samples.iter().sum::<f64>() / r as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (r - 1) as f64;
        Ok(Estimate { mean, se: sqrt(var / r as f64), replicates: r, seed })
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se + 1e-12 * value.abs().max(1.0)
    }
}

fn check_inputs(g: &Graph, start: usize, eps: f64, strategy: Strategy<'_>, stop: Stop<'_>) -> Result<()> {
    let n = g.n();
    if start >= n {
        return Err(Error::VertexOutOfRange { vertex: start, n });
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("bias {eps} outside [0,1]")));
    }
    match strategy {
        Strategy::Bias(b) if b.n() != n => {
            return Err(Error::InvalidParameter("bias matrix size differs from graph".into()));
        }
        Strategy::Cover(p) if p.n() != n || p.initial_mask() != 1 << start => {
            return Err(Error::InvalidParameter(format!("cover policy was not built for start vertex {start}")));
        }
        _ => {}
    }
    let dist = g.bfs_distances(start);
    match stop {
        Stop::Cover => {
            if let Some(v) = dist.iter().position(Option::is_none) {
                return Err(Error::Unreachable(v));
            }
        }
        Stop::Hit(target) => {
            if target.capacity() != n {
                return Err(Error::InvalidParameter("target set size differs from graph".into()));
            }
            if !target.iter().any(|v| dist[v].is_some()) {
                return Err(Error::Unreachable(start));
            }
        }
        Stop::Horizon(_) => {}
    }
    Ok(())
}

fn biased_choice(
    g: &Graph,
    strategy: Strategy<'_>,
    trace: &[usize],
    visited_mask: u64,
    rng: &mut ChaCha8Rng,
) -> Option<usize> {
    let x = *trace.last().expect("trace holds the start");
    match strategy {
        Strategy::None => None,
        Strategy::Bias(b) => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let nb = g.neighbours(x);
            for &y in nb {
                acc += b.get(x, y);
                if u < acc {
                    return Some(y);
                }
            }
            nb.iter().rev().copied().find(|&y| b.get(x, y) > 0.0)
        }
        Strategy::Cover(p) => p.choice(x, visited_mask as u32),
        Strategy::Trajectory(t) => t.preferred(trace),
    }
}

/// Runs one walk on an explicit generator.
pub fn simulate_with(
    g: &Graph,
    start: usize,
    strategy: Strategy<'_>,
    eps: f64,
    stop: Stop<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<usize>, Vec<bool>)> {
    check_inputs(g, start, eps, strategy, stop)?;
    let n = g.n();
    let mut visited = VertexSet::singleton(n, start);
    let mut mask = 1u64.checked_shl(start as u32).unwrap_or(0);
    let mut vertices = vec![start];
    let mut biased = Vec::new();
    loop {
        let done = match stop {
            Stop::Cover => visited.len() == n,
            Stop::Hit(target) => target.contains(*vertices.last().expect("nonempty")),
            Stop::Horizon(t) => biased.len() == t,
        };
        if done {
            return Ok((vertices, biased));
        }
        if biased.len() >= STEP_LIMIT {
            return Err(Error::StepLimit(STEP_LIMIT));
        }
        let x = *vertices.last().expect("nonempty");
        let nb = g.neighbours(x);
        if nb.is_empty() {
            return Err(Error::Sink(x));
        }
        let coin = rng.random::<f64>() < eps;
        let chosen = if coin { biased_choice(g, strategy, &vertices, mask, rng) } else { None };
        let y = match chosen {
            Some(y) => y,
            None => nb[rng.random_range(0..nb.len())],
        };
        vertices.push(y);
        biased.push(coin);
        if visited.insert(y) && y < 64 {
            mask |= 1 << y;
        }
    }
}

/// One walk on stream 0 of `seed`.
pub fn simulate(
    g: &Graph,
    start: usize,
    strategy: Strategy<'_>,
    eps: f64,
    stop: Stop<'_>,
    seed: u64,
) -> Result<WalkTrace> {
    replicate(g, start, strategy, eps, stop, seed, 0)
}

/// Replicate `r` of a run with master seed `seed`.
pub fn replicate(
    g: &Graph,
    start: usize,
    strategy: Strategy<'_>,
    eps: f64,
    stop: Stop<'_>,
    seed: u64,
    r: u64,
) -> Result<WalkTrace> {
    let mut rng = substream(seed, r);
    let (vertices, biased) = simulate_with(g, start, strategy, eps, stop, &mut rng)?;
    Ok(WalkTrace { start, vertices, biased, seed })
}

/// Mean stopping time over `replicates` independent walks.
pub fn estimate(
    g: &Graph,
    start: usize,
    strategy: Strategy<'_>,
    eps: f64,
    stop: Stop<'_>,
    replicates: usize,
    seed: u64,
) -> Result<Estimate> {
    let times = (0..replicates as u64)
        .map(|r| replicate(g, start, strategy, eps, stop, seed, r).map(|t| t.steps() as f64))
        .collect::<Result<Vec<f64>>>()?;
    Estimate::from_samples(&times, seed)
}

/// Frequency with which walks of the predicate's horizon satisfy it.
pub fn estimate_event(
    g: &Graph,
    start: usize,
    strategy: Strategy<'_>,
    eps: f64,
    pred: &TrajectoryPredicate,
    replicates: usize,
    seed: u64,
) -> Result<Estimate> {
    let stop = Stop::Horizon(pred.horizon());
    let hits = (0..replicates as u64)
        .map(|r| {
            replicate(g, start, strategy, eps, stop, seed, r)
                .map(|t| if pred.holds(&t.vertices) { 1.0 } else { 0.0 })
        })
        .collect::<Result<Vec<f64>>>()?;
    Estimate::from_samples(&hits, seed)
}

/// Mean number of unvisited vertices `U(2x·t_hit)` of the simple walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacantRow {
    pub x: usize,
    /// `⌈2x·t_hit⌉`.
    pub time: usize,
    /// `n / 2^x`.
    pub bound: f64,
    pub estimate: Estimate,
    /// Estimate above the bound by more than three standard errors.
    pub flagged: bool,
}

pub fn vacant_profile(g: &Graph, start: usize, xs: &[usize], seed: u64, replicates: usize) -> Result<Vec<VacantRow>> {
    let n = g.n();
    let t_hit = if n < 2 { 0.0 } else { srw_hit_time_max(g)? };
    let times: Vec<usize> = xs.iter().map(|&x| ceil(2.0 * x as f64 * t_hit) as usize).collect();
    let horizon = times.iter().copied().max().unwrap_or(0);
    let mut samples = vec![Vec::with_capacity(replicates); xs.len()];
    for r in 0..replicates as u64 {
        let trace = replicate(g, start, Strategy::None, 0.0, Stop::Horizon(horizon), seed, r)?;
        for (i, &t) in times.iter().enumerate() {
            samples[i].push(trace.unvisited_after(n, t) as f64);
        }
    }
    xs.iter()
        .zip(times)
        .zip(samples)
        .map(|((&x, time), s)| {
            let estimate = Estimate::from_samples(&s, seed)?;
            let bound = n as f64 / libm::exp2(x as f64);
            let flagged = estimate.mean > bound + 3.0 * estimate.se;
            Ok(VacantRow { x, time, bound, estimate, flagged })
        })
        .collect()
}

/// Two-phase cover walk: uniform choices until at most
/// `max(1, ⌊n/ln²n⌋)` vertices are left, then repeated windows of
/// `w = ⌈4 t_rel ln n⌉` steps, each following the optimal strategy for
/// hitting the remaining set within `w` steps and rebuilt whenever a new
/// vertex is reached or the window runs out.
pub fn phase_cover_strategy(g: &Graph, start: usize, eps: f64, seed: u64) -> Result<WalkTrace> {
    let n = g.n();
    check_inputs(g, start, eps, Strategy::None, Stop::Cover)?;
    if g.is_directed() {
        return Err(Error::Directed);
    }
    let mut rng = substream(seed, 0);
    let mut visited = VertexSet::singleton(n, start);
    let mut vertices = vec![start];
    let mut biased = Vec::new();
    let lnn = ln(n as f64);
    let threshold = if n < 2 { 1 } else { 1usize.max(floor(n as f64 / (lnn * lnn)) as usize) };
    let mut step = |vertices: &mut Vec<usize>, biased: &mut Vec<bool>, visited: &mut VertexSet, pick: Option<usize>| {
        let x = *vertices.last().expect("nonempty");
        let nb = g.neighbours(x);
        let coin = rng.random::<f64>() < eps;
        let y = match (coin, pick) {
            (true, Some(y)) => y,
            _ => nb[rng.random_range(0..nb.len())],
        };
        vertices.push(y);
        biased.push(coin);
        visited.insert(y)
    };
    while visited.len() < n && n - visited.len() > threshold {
        if biased.len() >= PHASE_STEP_LIMIT {
            return Err(Error::StepLimit(PHASE_STEP_LIMIT));
        }
        step(&mut vertices, &mut biased, &mut visited, None);
    }
    let w = lazyconv_window(g)?.max(1);
    while visited.len() < n {
        let here = *vertices.last().expect("nonempty");
        let pred = TrajectoryPredicate::hit_by(visited.complement(), w);
        let plan = trajectory_boost(g, here, &pred, &eps)?.strategy;
        let mut window = vec![here];
        for _ in 0..w {
            if biased.len() >= PHASE_STEP_LIMIT {
                return Err(Error::StepLimit(PHASE_STEP_LIMIT));
            }
            let pick = plan.preferred(&window);
            let fresh = step(&mut vertices, &mut biased, &mut visited, pick);
            window.push(*vertices.last().expect("nonempty"));
            if fresh {
                break;
            }
        }
    }
    Ok(WalkTrace { start, vertices, biased, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};
    use crate::strategy::optimal_cover_policy;

    fn adjacent(g: &Graph, t: &WalkTrace) -> bool {
        t.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    #[test]
    fn fully_biased_cover_is_deterministic() {
        let g = generate(&GraphFamily::Path(3)).unwrap();
        let p = optimal_cover_policy(&g, 1, 1.0).unwrap();
        let a = simulate(&g, 1, Strategy::Cover(&p), 1.0, Stop::Cover, 1).unwrap();
        let b = simulate(&g, 1, Strategy::Cover(&p), 1.0, Stop::Cover, 2).unwrap();
        assert_eq!(a.steps(), 3);
        assert_eq!(a.vertices, b.vertices);
        assert!(adjacent(&g, &a));
    }

    #[test]
    fn reproducible() {
        let g = generate(&GraphFamily::Petersen).unwrap();
        let a = simulate(&g, 0, Strategy::None, 0.3, Stop::Cover, 9).unwrap();
        assert_eq!(a, simulate(&g, 0, Strategy::None, 0.3, Stop::Cover, 9).unwrap());
        assert_ne!(a, simulate(&g, 0, Strategy::None, 0.3, Stop::Cover, 10).unwrap());
        assert!(adjacent(&g, &a));
    }

    #[test]
    fn two_vertex_hit() {
        let g = generate(&GraphFamily::Path(2)).unwrap();
        let target = VertexSet::singleton(2, 1);
        let e = estimate(&g, 0, Strategy::None, 0.4, Stop::Hit(&target), 50, 3).unwrap();
        assert_eq!((e.mean, e.se), (1.0, 0.0));
        assert!(estimate(&g, 0, Strategy::None, 0.4, Stop::Hit(&target), 1, 3).is_err());
    }

    #[test]
    fn mismatched_cover_policy_is_rejected() {
        let g = generate(&GraphFamily::Path(3)).unwrap();
        let p = optimal_cover_policy(&g, 0, 0.5).unwrap();
        assert!(simulate(&g, 1, Strategy::Cover(&p), 0.5, Stop::Cover, 0).is_err());
    }

    #[test]
    fn vacant_profile_at_time_zero() {
        let g = generate(&GraphFamily::Cycle(8)).unwrap();
        let rows = vacant_profile(&g, 0, &[0, 1], 5, 200).unwrap();
        assert_eq!(rows[0].estimate.mean, 7.0);
        assert!(!rows[0].flagged && !rows[1].flagged);
    }

    #[test]
    fn phase_cover_without_bias_is_the_simple_walk() {
        let g = generate(&GraphFamily::Cycle(8)).unwrap();
        for seed in 0..20 {
            let a = phase_cover_strategy(&g, 0, 0.0, seed).unwrap();
            let b = simulate(&g, 0, Strategy::None, 0.0, Stop::Cover, seed).unwrap();
            assert_eq!(a.vertices, b.vertices);
        }
        let one = Graph::new(1, false, &[]).unwrap();
        assert_eq!(phase_cover_strategy(&one, 0, 0.5, 0).unwrap().steps(), 0);
    }

    #[test]
    fn phase_cover_terminates_on_library() {
        for fam in [GraphFamily::Cycle(12), GraphFamily::Petersen, GraphFamily::Star { leaves: 8 }] {
            let g = generate(&fam).unwrap();
            let t = phase_cover_strategy(&g, 0, 0.5, 4).unwrap();
            assert_eq!(t.unvisited_after(g.n(), t.steps()), 0);
            assert!(adjacent(&g, &t));
        }
    }
}
