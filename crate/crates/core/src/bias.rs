//! The ε-bias machinery: the max/average operator, power means, biased
//! kernels and the optimal strategy for trajectory events.
//!
//! A time-biased controller that wants to maximise the probability of an
//! event over the first `t` steps solves a backward recursion on the
//! trajectory tree: the value of a prefix is `MA_ε` of the values of its
//! one-step extensions. Routines are generic over the scalar so the same code
//! runs in `f64` and in exact rational arithmetic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::chain::TransitionKernel;
use crate::graph::{Graph, VertexSet};
use crate::math::powf;
use crate::{Error, Result};

/// Number types the exact routines run over: `f64` and `BigRational`.
pub trait Scalar: Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + fmt::Debug {}

impl<T> Scalar for T where T: Clone + PartialOrd + Num + FromPrimitive + ToPrimitive + fmt::Debug {}

/// Largest horizon for predicates evaluated by explicit prefix enumeration.
pub const CUSTOM_HORIZON_LIMIT: usize = 12;

fn check_eps<T: Scalar>(eps: &T) -> Result<()> {
    if *eps < T::zero() || *eps > T::one() {
        return Err(Error::InvalidParameter(format!("bias {eps:?} outside [0,1]")));
    }
    Ok(())
}

fn from_count<T: Scalar>(k: usize) -> T {
    T::from_usize(k).expect("counts are representable")
}

/// `ε·max(xs) + (1-ε)·mean(xs)`.
pub fn ma_epsilon<T: Scalar>(eps: &T, xs: &[T]) -> Result<T> {
    check_eps(eps)?;
    let Some(first) = xs.first() else {
        return Err(Error::Empty);
    };
    if xs.iter().any(|x| *x < T::zero()) {
        return Err(Error::InvalidParameter("max/average operator needs nonnegative entries".into()));
    }
    Ok(ma_unchecked(eps, first, xs))
}

fn ma_unchecked<T: Scalar>(eps: &T, first: &T, xs: &[T]) -> T {
    let mut max = first.clone();
    let mut sum = T::zero();
    for x in xs {
        if *x > max {
            max = x.clone();
        }
        sum = sum + x.clone();
    }
    let mean = sum / from_count(xs.len());
    eps.clone() * max + (T::one() - eps.clone()) * mean
}

/// Power mean `((Σ x_i^p)/m)^(1/p)`; `p = f64::INFINITY` gives the maximum.
pub fn power_mean(p: f64, xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Empty);
    }
    if p == 0.0 || p.is_nan() || p == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(format!("power mean exponent {p} unsupported")));
    }
    if xs.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidParameter("power mean needs nonnegative entries".into()));
    }
    if p == f64::INFINITY {
        return Ok(xs.iter().fold(0.0, |m: f64, &x| m.max(x)));
    }
    let s: f64 = xs.iter().map(|&x| powf(x, p)).sum();
    Ok(powf(s / xs.len() as f64, 1.0 / p))
}

/// Controller matrix: a row-stochastic matrix supported on the arcs of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasMatrix {
    n: usize,
    data: Vec<f64>,
}

impl BiasMatrix {
    pub fn new(g: &Graph, data: Vec<f64>) -> Result<Self> {
        let k = TransitionKernel::new(g.n(), data, false)?;
        k.supported_on(g)?;
        Ok(BiasMatrix { n: g.n(), data: k.as_slice().to_vec() })
    }

    /// Row `x` is a point mass on `choice[x]`; `None` rows are uniform.
    pub fn point_masses(g: &Graph, choice: &[Option<usize>]) -> Result<Self> {
        let n = g.n();
        let mut data = vec![0.0; n * n];
        for x in 0..n {
            match choice.get(x).copied().flatten() {
                Some(y) => data[x * n + y] = 1.0,
                None => {
                    let d = g.degree(x);
                    if d == 0 {
                        return Err(Error::Sink(x));
                    }
                    for &y in g.neighbours(x) {
                        data[x * n + y] = 1.0 / d as f64;
                    }
                }
            }
        }
        Self::new(g, data)
    }

    pub fn uniform(g: &Graph) -> Result<Self> {
        Self::point_masses(g, &vec![None; g.n()])
    }

    pub fn n(&self) -> usize {
        self.n
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
}

/// `(1-ε)P + εB` with `P` the unweighted simple random walk.
pub fn brw_kernel(g: &Graph, eps: f64, b: &BiasMatrix) -> Result<TransitionKernel> {
    check_eps(&eps)?;
    let n = g.n();
    if b.n != n {
        return Err(Error::InvalidParameter("bias matrix size differs from graph".into()));
    }
    let mut data = vec![0.0; n * n];
    for x in 0..n {
        let d = g.degree(x);
        if d == 0 {
            return Err(Error::Sink(x));
        }
        for y in 0..n {
            let p = if g.has_edge(x, y) { 1.0 / d as f64 } else { 0.0 };
            let bxy = b.get(x, y);
            if bxy > 0.0 && p == 0.0 {
                return Err(Error::SupportViolation { row: x, col: y });
            }
            data[x * n + y] = if eps == 0.0 {
                p
            } else if eps == 1.0 {
                bxy
            } else {
                (1.0 - eps) * p + eps * bxy
            };
        }
    }
    TransitionKernel::new(n, data, false)
}

/// Event on walk prefixes `x_0 … x_t` started at a fixed vertex.
#[derive(Clone)]
pub enum TrajectoryPredicate {
    /// The walk is in `set` at time `horizon`.
    AtSet { set: VertexSet, horizon: usize },
    /// The walk visits `set` at some time in `0..=horizon`.
    HitBy { set: VertexSet, horizon: usize },
    /// Arbitrary membership test on complete prefixes of length `horizon + 1`.
    Custom { horizon: usize, test: Arc<dyn Fn(&[usize]) -> bool + Send + Sync> },
}

impl TrajectoryPredicate {
    pub fn at_set(set: VertexSet, horizon: usize) -> Self {
        TrajectoryPredicate::AtSet { set, horizon }
    }

    pub fn hit_by(set: VertexSet, horizon: usize) -> Self {
        TrajectoryPredicate::HitBy { set, horizon }
    }

    pub fn custom(horizon: usize, test: impl Fn(&[usize]) -> bool + Send + Sync + 'static) -> Self {
        TrajectoryPredicate::Custom { horizon, test: Arc::new(test) }
    }

    pub fn horizon(&self) -> usize {
        match self {
            TrajectoryPredicate::AtSet { horizon, .. }
            | TrajectoryPredicate::HitBy { horizon, .. }
            | TrajectoryPredicate::Custom { horizon, .. } => *horizon,
        }
    }

    /// Evaluates the event on a complete trajectory.
    pub fn holds(&self, trajectory: &[usize]) -> bool {
        match self {
            TrajectoryPredicate::AtSet { set, horizon } => {
                trajectory.get(*horizon).is_some_and(|&v| set.contains(v))
            }
            TrajectoryPredicate::HitBy { set, horizon } => {
                trajectory.iter().take(horizon + 1).any(|&v| set.contains(v))
            }
            TrajectoryPredicate::Custom { horizon, test } => {
                trajectory.len() > *horizon && test(&trajectory[..=*horizon])
            }
        }
    }
}

impl fmt::Debug for TrajectoryPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryPredicate::AtSet { set, horizon } => {
                f.debug_struct("AtSet").field("set", set).field("horizon", horizon).finish()
            }
            TrajectoryPredicate::HitBy { set, horizon } => {
                f.debug_struct("HitBy").field("set", set).field("horizon", horizon).finish()
            }
            TrajectoryPredicate::Custom { horizon, .. } => {
                f.debug_struct("Custom").field("horizon", horizon).finish_non_exhaustive()
            }
        }
    }
}

/// Depth-indexed argmax table of the trajectory recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStrategy {
    horizon: usize,
    table: StrategyTable,
}

#[derive(Debug, Clone, PartialEq)]
enum StrategyTable {
    /// `choice[depth][state]` with state `v` or `v + n` once the target was hit.
    Markov { n: usize, hit_set: Option<VertexSet>, choice: Vec<Vec<Option<usize>>> },
    Prefix(BTreeMap<Vec<usize>, usize>),
}

impl TrajectoryStrategy {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Preferred next vertex after `prefix`, or `None` when the horizon is
    /// reached or every extension has the same value.
    pub fn preferred(&self, prefix: &[usize]) -> Option<usize> {
        let depth = prefix.len().checked_sub(1)?;
        if depth >= self.horizon {
            return None;
        }
        match &self.table {
            StrategyTable::Markov { n, hit_set, choice } => {
                let v = *prefix.last()?;
                let hit = hit_set.as_ref().is_some_and(|s| prefix.iter().any(|&x| s.contains(x)));
                *choice[depth].get(v + if hit { *n } else { 0 })?
            }
            StrategyTable::Prefix(map) => map.get(prefix).copied(),
        }
    }
}

/// Result of the trajectory recursion.
#[derive(Debug, Clone)]
pub struct Boost<T> {
    /// Probability of the event under the simple random walk.
    pub p: T,
    /// Optimal probability for the ε-time-biased walk.
    pub q: T,
    pub strategy: TrajectoryStrategy,
    /// `Φ^(i)` for `i = 0..=t`; empty when `ε = 1`.
    pub potential: Vec<f64>,
}

/// Optimal ε-time-biased probability of a trajectory event from `u`, with
/// the SRW probability and the argmax strategy. Ties go to the smallest
/// vertex. Uniform steps ignore edge weights.
pub fn trajectory_boost<T: Scalar>(
    g: &Graph,
    u: usize,
    pred: &TrajectoryPredicate,
    eps: &T,
) -> Result<Boost<T>> {
    check_eps(eps)?;
    let n = g.n();
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    let exponent = eps.to_f64().and_then(|e| (e < 1.0).then(|| 1.0 / (1.0 - e)));
    match pred {
        TrajectoryPredicate::AtSet { set, horizon } => markov_boost(g, u, set, *horizon, false, eps, exponent),
        TrajectoryPredicate::HitBy { set, horizon } => markov_boost(g, u, set, *horizon, true, eps, exponent),
        TrajectoryPredicate::Custom { horizon, test } => {
            if *horizon > CUSTOM_HORIZON_LIMIT {
                return Err(Error::HorizonTooLarge { horizon: *horizon, limit: CUSTOM_HORIZON_LIMIT });
            }
            prefix_boost(g, u, *horizon, test.as_ref(), eps, exponent)
        }
    }
}

fn indicator<T: Scalar>(b: bool) -> T {
    if b {
        T::one()
    } else {
        T::zero()
    }
}

/// Recursion over states `(v, hit)` for predicates that only depend on the
/// current vertex and, for hitting events, on whether the set was visited.
fn markov_boost<T: Scalar>(
    g: &Graph,
    u: usize,
    set: &VertexSet,
    t: usize,
    hitting: bool,
    eps: &T,
    exponent: Option<f64>,
) -> Result<Boost<T>> {
    let n = g.n();
    let states = 2 * n;
    let next_state = |s: usize, y: usize| {
        if hitting && (s >= n || set.contains(y)) {
            y + n
        } else {
            y
        }
    };
    let start = if hitting && set.contains(u) { u + n } else { u };

    // Forward pass: reachable states and their SRW probabilities.
    let mut prob = vec![vec![0.0f64; states]; t + 1];
    prob[0][start] = 1.0;
    for i in 0..t {
        for s in 0..states {
            let mass = prob[i][s];
            if mass == 0.0 {
                continue;
            }
            let v = s % n;
            let d = g.degree(v);
            if d == 0 {
                return Err(Error::NoExtension { vertex: v, depth: i });
            }
            for &y in g.neighbours(v) {
                prob[i + 1][next_state(s, y)] += mass / d as f64;
            }
        }
    }

    let terminal = |s: usize| -> bool {
        if hitting {
            s >= n
        } else {
            set.contains(s)
        }
    };
    let mut q: Vec<Option<T>> = (0..states)
        .map(|s| (prob[t][s] > 0.0).then(|| indicator(terminal(s))))
        .collect();
    let mut p: Vec<Option<T>> = q.clone();
    let mut potential = vec![0.0; t + 1];
    if let Some(e) = exponent {
        potential[t] = phi_layer(&q, &prob[t], e);
    }
    let mut choice = vec![vec![None; states]; t];
    for i in (0..t).rev() {
        let mut q_next = vec![None; states];
        let mut p_next = vec![None; states];
        for s in (0..states).filter(|&s| prob[i][s] > 0.0) {
            let v = s % n;
            let kids: Vec<usize> = g.neighbours(v).iter().map(|&y| next_state(s, y)).collect();
            let qs: Vec<T> = kids.iter().map(|&c| q[c].clone().expect("child reachable")).collect();
            let ps: Vec<T> = kids.iter().map(|&c| p[c].clone().expect("child reachable")).collect();
            let mut best = 0;
            for (k, val) in qs.iter().enumerate() {
                if *val > qs[best] {
                    best = k;
                }
            }
            if qs.iter().any(|val| *val != qs[best]) {
                choice[i][s] = Some(g.neighbours(v)[best]);
            } else {
                choice[i][s] = Some(g.neighbours(v)[0]);
            }
            q_next[s] = Some(ma_unchecked(eps, &qs[0], &qs));
            p_next[s] = Some(ma_unchecked(&T::zero(), &ps[0], &ps));
        }
        q = q_next;
        p = p_next;
        if let Some(e) = exponent {
            potential[i] = phi_layer(&q, &prob[i], e);
        }
    }
    Ok(Boost {
        p: p[start].clone().expect("start reachable"),
        q: q[start].clone().expect("start reachable"),
        strategy: TrajectoryStrategy {
            horizon: t,
            table: StrategyTable::Markov { n, hit_set: hitting.then(|| set.clone()), choice },
        },
        potential: if exponent.is_some() { potential } else { Vec::new() },
    })
}

fn phi_layer<T: Scalar>(q: &[Option<T>], prob: &[f64], exponent: f64) -> f64 {
    q.iter()
        .zip(prob)
        .filter_map(|(v, &pr)| v.as_ref().map(|v| powf(v.to_f64().unwrap_or(0.0), exponent) * pr))
        .sum()
}

struct PrefixSearch<'a, T> {
    g: &'a Graph,
    t: usize,
    test: &'a (dyn Fn(&[usize]) -> bool + Send + Sync),
    eps: &'a T,
    exponent: Option<f64>,
    potential: Vec<f64>,
    table: BTreeMap<Vec<usize>, usize>,
}

impl<T: Scalar> PrefixSearch<'_, T> {
    /// Returns `(p, q)` for the subtree below `prefix`, reached with SRW
    /// probability `weight`.
    fn visit(&mut self, prefix: &mut Vec<usize>, weight: f64) -> Result<(T, T)> {
        let depth = prefix.len() - 1;
        let (p, q) = if depth == self.t {
            let v: T = indicator((self.test)(prefix));
            (v.clone(), v)
        } else {
            let v = *prefix.last().expect("nonempty prefix");
            let kids = self.g.neighbours(v);
            if kids.is_empty() {
                return Err(Error::NoExtension { vertex: v, depth });
            }
            let mut ps = Vec::with_capacity(kids.len());
            let mut qs = Vec::with_capacity(kids.len());
            for &y in kids {
                prefix.push(y);
                let (p, q) = self.visit(prefix, weight / kids.len() as f64)?;
                prefix.pop();
                ps.push(p);
                qs.push(q);
            }
            let mut best = 0;
            for (k, val) in qs.iter().enumerate() {
                if *val > qs[best] {
                    best = k;
                }
            }
            self.table.insert(prefix.clone(), kids[best]);
            (ma_unchecked(&T::zero(), &ps[0], &ps), ma_unchecked(self.eps, &qs[0], &qs))
        };
        if let Some(e) = self.exponent {
            self.potential[depth] += powf(q.to_f64().unwrap_or(0.0), e) * weight;
        }
        Ok((p, q))
    }
}

fn prefix_boost<T: Scalar>(
    g: &Graph,
    u: usize,
    t: usize,
    test: &(dyn Fn(&[usize]) -> bool + Send + Sync),
    eps: &T,
    exponent: Option<f64>,
) -> Result<Boost<T>> {
    let mut search = PrefixSearch {
        g,
        t,
        test,
        eps,
        exponent,
        potential: vec![0.0; t + 1],
        table: BTreeMap::new(),
    };
    let (p, q) = search.visit(&mut vec![u], 1.0)?;
    Ok(Boost {
        p,
        q,
        strategy: TrajectoryStrategy { horizon: t, table: StrategyTable::Prefix(search.table) },
        potential: if exponent.is_some() { search.potential } else { Vec::new() },
    })
}

/// `Φ^(i) = Σ_{|x| = i} q_x^(1+δ) Pr[W_u(i) = x]` with `δ = ε/(1-ε)`.
pub fn phi_potential(g: &Graph, u: usize, pred: &TrajectoryPredicate, eps: f64, i: usize) -> Result<f64> {
    let profile = potential_profile(g, u, pred, eps)?;
    profile.get(i).copied().ok_or_else(|| {
        Error::InvalidParameter(format!("depth {i} beyond horizon {}", pred.horizon()))
    })
}

/// `Φ^(i)` for every depth `0..=t`.
pub fn potential_profile(g: &Graph, u: usize, pred: &TrajectoryPredicate, eps: f64) -> Result<Vec<f64>> {
    if eps >= 1.0 {
        return Err(Error::InvalidParameter("the potential needs ε < 1".into()));
    }
    Ok(trajectory_boost(g, u, pred, &eps)?.potential)
}
