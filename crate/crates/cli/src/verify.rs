//! Verification suites: every invariant and acceptance criterion as a
//! machine-readable check with its measured slack.
//!
//! Checks inside a suite may run in parallel; the report keeps a fixed
//! order and carries no timings, so it is identical across runs for a seed.

use std::collections::BTreeSet;

use biaswalk_core::bias::{
    brw_kernel, ma_epsilon, phi_potential, power_mean, trajectory_boost, BiasMatrix,
    TrajectoryPredicate,
};
use biaswalk_core::chain::{
    hitting_times_srw, lazy_kernel, lazyconv_audit, lazyconv_check, spectral_profile, srw_kernel, stationary,
};
use biaswalk_core::gadget::{
    hamilton_crossing_check, hamilton_reduction, octopus_stats, qsat_graph, quincunx, quincunx_optimum,
    quincunx_success, roundabout, slow_path, slow_path_expected, slow_path_report, star_connector, steep_hill,
    tsat_tunsat, QsatInstance, GADGET_EPS,
};
use biaswalk_core::graph::{connected_graphs, generate, library, GraphFamily};
use biaswalk_core::rng::substream;
use biaswalk_core::sim::{estimate, phase_cover_strategy, simulate, vacant_profile, Stop, Strategy};
use biaswalk_core::strategy::{
    azarconj_check, best_step, boost_stationary_scheme, bound_report, cost_decision, dense_no_boost_check,
    emulate_weights, emulation_gap, emulation_threshold, max_stationary, next_step, optimal_cover_policy,
    optimal_hitting_policy, simple_walk_sandwich, weighted_walk_kernel, WeightScheme,
};
use biaswalk_core::{Connectivity, Graph, VertexSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::oracle;

pub const SUITES: [&str; 8] = ["boosting", "anticonvexity", "hitting", "cover", "stationary", "gadgets", "simulation", "all"];

/// Every operation the library and command line expose. `verify --suite all`
/// asserts that its checks touch each one.
pub const OPERATIONS: [&str; 45] = [
    "generate",
    "degree_stats",
    "connectivity",
    "bfs_distances",
    "srw_kernel",
    "lazy_kernel",
    "stationary",
    "spectral_profile",
    "hitting_times_srw",
    "lazyconv_check",
    "ma_epsilon",
    "power_mean",
    "brw_kernel",
    "trajectory_boost",
    "phi_potential",
    "optimal_hitting_policy",
    "max_stationary",
    "azarconj_check",
    "weighted_walk_kernel",
    "emulate_weights",
    "boost_stationary_scheme",
    "simple_walk_sandwich",
    "dense_no_boost_check",
    "optimal_cover_policy",
    "cost_decision",
    "best_step",
    "next_step",
    "bound_report",
    "quincunx",
    "quincunx_success",
    "slow_path",
    "steep_hill",
    "slow_path_expected",
    "star_connector",
    "octopus_stats",
    "roundabout",
    "qsat_graph",
    "tsat_tunsat",
    "hamilton_reduction",
    "simulate",
    "estimate",
    "vacant_profile",
    "phase_cover_strategy",
    "dispatch",
    "verify",
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u8>,
    pub name: String,
    pub passed: bool,
    /// Informational entries report a finding and never count as failures.
    pub informational: bool,
    /// Smallest margin by which the checked inequality holds; negative on
    /// failure. Absent for checks without a numeric margin.
    pub slack: Option<f64>,
    pub detail: String,
    #[serde(skip)]
    pub ops: &'static [&'static str],
}

impl Check {
    fn new(suite: &'static str, criterion: Option<u8>, name: impl Into<String>, ops: &'static [&'static str]) -> Self {
        Check {
            suite,
            criterion,
            name: name.into(),
            passed: false,
            informational: false,
            slack: None,
            detail: String::new(),
            ops,
        }
    }

    fn outcome(mut self, passed: bool, slack: Option<f64>, detail: impl Into<String>) -> Self {
        self.passed = passed;
        self.slack = slack.map(crate::io::round_sig).filter(|s| s.is_finite());
        self.detail = detail.into();
        self
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn error(self, e: impl std::fmt::Display) -> Self {
        self.outcome(false, None, format!("error: {e}"))
    }

    pub fn failed(&self) -> bool {
        !self.passed && !self.informational
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Coverage {
    pub covered: Vec<&'static str>,
    pub missing: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub failures: usize,
    pub coverage: Coverage,
}

/// Runs a named suite.
pub fn verify(suite: &str, seed: u64) -> Option<Report> {
    let checks = match suite {
        "all" => {
            let mut all: Vec<Check> = SUITES[..7].iter().flat_map(|s| suite_checks(s, seed)).collect();
            let covered = covered_ops(&all);
            let missing: Vec<&str> = OPERATIONS.iter().copied().filter(|op| !covered.contains(op)).collect();
            let c = Check::new("all", None, "operation coverage", &["verify"]);
            all.push(c.outcome(
                missing.is_empty(),
                None,
                format!("{} of {} operations exercised", OPERATIONS.len() - missing.len(), OPERATIONS.len()),
            ));
            all
        }
        s if SUITES.contains(&s) => suite_checks(s, seed),
        _ => return None,
    };
    let covered = covered_ops(&checks);
    let coverage = Coverage {
        covered: OPERATIONS.iter().copied().filter(|op| covered.contains(op) || *op == "verify").collect(),
        missing: OPERATIONS.iter().copied().filter(|op| !covered.contains(op) && *op != "verify").collect(),
    };
    let failures = checks.iter().filter(|c| c.failed()).count();
    Some(Report { suite: suite.into(), seed, checks, failures, coverage })
}

fn covered_ops(checks: &[Check]) -> BTreeSet<&'static str> {
    checks.iter().flat_map(|c| c.ops.iter().copied()).chain(["verify"]).collect()
}

fn suite_checks(suite: &str, seed: u64) -> Vec<Check> {
    let groups: Vec<Vec<Check>> = match suite {
        "boosting" => vec![criterion(1, seed), criterion(2, seed)],
        "anticonvexity" => vec![criterion(3, seed)],
        "hitting" => vec![
            graph_basics(),
            kernel_sanity(seed),
            criterion(5, seed),
            small_graph_bounds(),
            criterion(7, seed),
            hitting_monotone(),
        ],
        "cover" => vec![criterion(6, seed), cover_decisions(), randomized_cover(seed)],
        "stationary" => vec![
            criterion(8, seed),
            criterion(9, seed),
            criterion(10, seed),
            criterion(13, seed),
            vec![scheme_boost()],
        ],
        "gadgets" => vec![criterion(4, seed), criterion(11, seed), gadget_constructions(), dispatch_smoke()],
        "simulation" => vec![criterion(12, seed), criterion(14, seed), replay_and_determinism(seed)],
        _ => Vec::new(),
    };
    groups.into_iter().flatten().collect()
}

/// Checks behind one acceptance criterion (1 to 14).
pub fn criterion(k: u8, seed: u64) -> Vec<Check> {
    match k {
        1 => figure_one(),
        2 => boosting_exhaustive(),
        3 => anticonvexity(seed),
        4 => slow_path_certifier(),
        5 => leaving_time_bounds(),
        6 => cover_against_enumeration(seed),
        7 => hitting_against_enumeration(),
        8 => emulation(seed),
        9 => stationary_lower_bound(),
        10 => counterexamples(seed),
        11 => gadget_certificates(),
        12 => lazy_convergence(seed),
        13 => ring_trend(),
        14 => substitutes(seed),
        _ => Vec::new(),
    }
}

fn fam(f: GraphFamily) -> Graph {
    generate(&f).expect("fixed family parameters are valid")
}

fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0f64.max(b.abs())
}

/// Connected `G(n,p)` sample drawn from a seed, retrying later seeds until
/// connected.
fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    (0..)
        .map(|k| fam(GraphFamily::Gnp { n, p, seed: seed.wrapping_mul(7919).wrapping_add(k) }))
        .find(|g| g.is_irreducible())
        .expect("some sample is connected")
}

fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::new(n, false, &edges).expect("attachment trees are simple")
}

fn random_point_masses(g: &Graph, rng: &mut impl Rng) -> BiasMatrix {
    let pick: Vec<Option<usize>> =
        (0..g.n()).map(|v| Some(g.neighbours(v)[rng.random_range(0..g.degree(v))])).collect();
    BiasMatrix::point_masses(g, &pick).expect("picks are neighbours")
}

/// Nonempty vertex sets with at most two elements.
fn small_sets(n: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
    for a in 0..n {
        for b in a + 1..n {
            out.push(VertexSet::from_iter(n, [a, b]));
        }
    }
    out
}

pub fn figure_one_graph() -> Graph {
    // u = 0, x = 1, w = 2, and the target vertices y = 4, z = 5.
    Graph::new(6, false, &[(0, 1), (0, 4), (0, 2), (2, 3), (2, 5), (1, 3), (1, 5), (5, 4)]).expect("valid graph")
}

fn figure_one() -> Vec<Check> {
    const OPS: &[&str] = &["trajectory_boost", "phi_potential"];
    let g = figure_one_graph();
    let pred = TrajectoryPredicate::at_set(VertexSet::from_iter(6, [4, 5]), 2);
    let mut out = Vec::new();

    let c = Check::new("boosting", Some(1), "figure one, exact rationals", OPS);
    out.push(match trajectory_boost(&g, 0, &pred, &rational(1, 3)) {
        Ok(b) => {
            let ok = b.p == rational(7, 18) && b.q == rational(50, 81);
            c.outcome(ok, None, format!("p = {}, q = {}", b.p, b.q))
        }
        Err(e) => c.error(e),
    });

    let c = Check::new("boosting", Some(1), "figure one, floating point", OPS);
    out.push(match trajectory_boost(&g, 0, &pred, &(1.0f64 / 3.0)) {
        Ok(b) => {
            let gap = (b.p - 7.0 / 18.0).abs().max((b.q - 50.0 / 81.0).abs());
            let bound = b.p.powf(2.0 / 3.0);
            let ok = gap <= 1e-12 && b.q >= bound;
            c.outcome(ok, Some(b.q - bound), format!("q = {:.4} >= p^(2/3) = {bound:.4}; gap to exact {gap:.1e}", b.q))
        }
        Err(e) => c.error(e),
    });

    let c = Check::new("boosting", Some(1), "figure one, enumerated simple-walk probability", &[]);
    let p = oracle::srw_path_probability(&g, 0, 2, &|w| w[2] == 4 || w[2] == 5);
    out.push(c.outcome((p - 7.0 / 18.0).abs() < 1e-15, None, format!("p = {p}")));

    let c = Check::new("boosting", Some(1), "figure one, potential is non-increasing", OPS);
    out.push(match (0..=2).map(|i| phi_potential(&g, 0, &pred, 1.0 / 3.0, i)).collect::<Result<Vec<_>, _>>() {
        Ok(phi) => {
            let slack = phi.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
            c.outcome(slack >= -1e-12, Some(slack), format!("phi = {phi:?}"))
        }
        Err(e) => c.error(e),
    });
    out
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    slack: f64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { slack: f64::INFINITY, ..Default::default() }
    }

    fn record(&mut self, ok: bool, slack: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        self.slack = self.slack.min(slack);
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        self.slack = self.slack.min(other.slack);
        self.first = self.first.or(other.first);
        self
    }

    fn into_check(self, c: Check) -> Check {
        let detail = match &self.first {
            None => format!("{} cases", self.cases),
            Some(f) => format!("{} of {} cases fail; first: {f}", self.failures, self.cases),
        };
        let slack = self.slack.is_finite().then_some(self.slack);
        c.outcome(self.failures == 0 && self.cases > 0, slack, detail)
    }
}

fn all_connected(lo: usize, hi: usize) -> Vec<Graph> {
    (lo..=hi).flat_map(|n| connected_graphs(n).expect("small orders enumerate")).collect()
}

fn boosting_exhaustive() -> Vec<Check> {
    let graphs = all_connected(2, 6);
    let eps_grid = [0.1, 1.0 / 3.0, 0.5];
    let tallies: Vec<[Tally; 4]> = graphs
        .par_iter()
        .map(|g| {
            let n = g.n();
            let mut t = [Tally::new(), Tally::new(), Tally::new(), Tally::new()];
            for u in 0..n {
                for h in 1..=5 {
                    for set in small_sets(n) {
                        let members: Vec<usize> = set.iter().collect();
                        for hit in [false, true] {
                            let pred = if hit {
                                TrajectoryPredicate::hit_by(set.clone(), h)
                            } else {
                                TrajectoryPredicate::at_set(set.clone(), h)
                            };
                            let tag = || format!("n={n} edges={:?} u={u} t={h} W={members:?} hit_by={hit}", g.edges());
                            let mut p_seen = None;
                            for &eps in &eps_grid {
                                let b = match trajectory_boost::<f64>(g, u, &pred, &eps) {
                                    Ok(b) => b,
                                    Err(e) => {
                                        t[0].record(false, f64::NAN, || format!("{} eps={eps}: {e}", tag()));
                                        continue;
                                    }
                                };
                                let bound = b.p.powf(1.0 - eps);
                                t[0].record(b.q >= bound - 1e-12 && b.q >= b.p - 1e-12, (b.q - bound).min(b.q - b.p), || format!("{} eps={eps}", tag()));
                                let mono = b.potential.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
                                t[1].record(mono >= -1e-12, mono, || format!("{} eps={eps}", tag()));
                                p_seen.get_or_insert(b.p);
                                if n <= 5 && h <= 4 && (u + h) % 2 == 0 {
                                    // Second route: the same event as an opaque
                                    // predicate goes through the prefix search.
                                    let m = members.clone();
                                    let opaque = TrajectoryPredicate::custom(h, move |w: &[usize]| {
                                        if hit { w.iter().any(|v| m.contains(v)) } else { m.contains(&w[w.len() - 1]) }
                                    });
                                    match trajectory_boost(g, u, &opaque, &eps) {
                                        Ok(o) => {
                                            let gap = (o.q - b.q).abs().max((o.p - b.p).abs());
                                            t[3].record(gap < 1e-12, -gap, || format!("{} eps={eps} gap={gap}", tag()));
                                        }
                                        Err(e) => t[3].record(false, f64::NAN, || format!("{}: {e}", tag())),
                                    }
                                }
                            }
                            if n <= 5 && h <= 4 {
                                let p = p_seen.unwrap_or(f64::NAN);
                                let m = members.clone();
                                let want = oracle::srw_path_probability(g, u, h, &|w: &[usize]| {
                                    if hit { w.iter().any(|v| m.contains(v)) } else { m.contains(&w[h]) }
                                });
                                let gap = (p - want).abs();
                                t[2].record(gap < 1e-12, -gap, || format!("{} p={p} want={want}", tag()));
                            }
                        }
                    }
                }
            }
            t
        })
        .collect();
    let mut total = [Tally::new(), Tally::new(), Tally::new(), Tally::new()];
    for t in tallies {
        for (acc, x) in total.iter_mut().zip(t) {
            *acc = std::mem::replace(acc, Tally::new()).merge(x);
        }
    }
    let [bound, mono, srw, opaque] = total;
    const OPS: &[&str] = &["trajectory_boost"];
    vec![
        bound.into_check(Check::new("boosting", Some(2), "q >= max(p, p^(1-eps)) on all connected graphs n <= 6", OPS)),
        mono.into_check(Check::new("boosting", Some(2), "potential non-increasing on all connected graphs n <= 6", OPS)),
        srw.into_check(Check::new("boosting", Some(2), "p equals path enumeration, n <= 5, t <= 4", OPS)),
        opaque.into_check(Check::new("boosting", Some(2), "set predicates equal opaque prefix search, n <= 5, t <= 4", OPS)),
    ]
}

fn anticonvexity(seed: u64) -> Vec<Check> {
    const OPS: &[&str] = &["ma_epsilon", "power_mean"];
    let mut rng = substream(seed, 3);
    let mut t = Tally::new();
    let grid = [0.1, 1.0 / 3.0, 0.5, 0.9];
    for i in 0..100_000 {
        let m = rng.random_range(1..=8);
        let eps = grid[i % grid.len()];
        let xs: Vec<f64> = if i % 10 == 0 {
            (0..m).map(|_| f64::from(rng.random_range(0..2u8)) * 10.0).collect()
        } else {
            (0..m).map(|_| rng.random_range(0.0..=10.0)).collect()
        };
        let delta = eps / (1.0 - eps);
        match (power_mean(1.0 + delta, &xs), ma_epsilon(&eps, &xs)) {
            (Ok(lhs), Ok(rhs)) => t.record(lhs <= rhs + 1e-12, rhs - lhs, || format!("eps={eps} xs={xs:?}")),
            (Err(e), _) | (_, Err(e)) => t.record(false, f64::NAN, || format!("eps={eps}: {e}")),
        }
    }
    let mut out = vec![t.into_check(Check::new(
        "anticonvexity",
        Some(3),
        "M_(1+delta) <= MA_eps on 100000 random vectors, m <= 8, entries in [0,10]",
        OPS,
    ))];

    let mut found = Vec::new();
    let mut missing = Vec::new();
    for eps in [0.1, 0.25, 0.5, 0.75] {
        let delta = eps / (1.0 - eps);
        let mut sizes: Vec<usize> = std::iter::successors(Some(2usize), |m| Some(m * 2)).take_while(|&m| m <= 10_000).collect();
        sizes.push(10_000);
        let witness = sizes.into_iter().find(|&m| {
            let mut xs = vec![1.0; m];
            xs[0] = 0.0;
            let lhs = power_mean(1.0 + 2.0 * delta, &xs).unwrap_or(f64::NAN);
            let rhs = ma_epsilon(&eps, &xs).unwrap_or(f64::NAN);
            lhs > rhs + 1e-12
        });
        match witness {
            Some(m) => found.push(format!("eps={eps}: m={m}")),
            None => missing.push(eps),
        }
    }
    let c = Check::new("anticonvexity", Some(3), "exponent 1+2delta fails on (0,1,...,1) with m <= 10000", OPS);
    out.push(c.outcome(missing.is_empty(), None, format!("witnesses {}; none for {missing:?}", found.join(", "))));
    out
}

fn slow_path_certifier() -> Vec<Check> {
    const OPS: &[&str] = &["slow_path", "slow_path_expected", "optimal_hitting_policy", "steep_hill"];
    let mut closed = Tally::new();
    let mut solver = Tally::new();
    let mut shifted_matches = Vec::new();
    for l in 1..=25 {
        match slow_path_report(l) {
            Ok(r) => {
                closed.record(r.matches_closed_form, 0.0, || format!("l={l}: {} vs {}", r.traversal, r.closed_form));
                if r.matches_shifted_form {
                    shifted_matches.push(l);
                }
            }
            Err(e) => closed.record(false, f64::NAN, || format!("l={l}: {e}")),
        }
        let solved = slow_path(l).and_then(|p| {
            let (s, f) = (p.port("start").expect("start port"), p.port("finish").expect("finish port"));
            let h = optimal_hitting_policy(&p.graph, &VertexSet::singleton(p.graph.n(), f), GADGET_EPS)?;
            Ok(h.values[s])
        });
        let exact = slow_path_expected(l).ok().and_then(|x| x.to_f64()).unwrap_or(f64::NAN);
        match solved {
            Ok(v) => {
                let rel = (v - exact).abs() / exact;
                solver.record(rel <= 1e-9, -rel, || format!("l={l}: solver {v} vs {exact}"));
            }
            Err(e) => solver.record(false, f64::NAN, || format!("l={l}: {e}")),
        }
    }
    let mut out = vec![
        closed.into_check(Check::new("gadgets", Some(4), "slow path traversal equals (11/3)(8/5)^l - 5/3, l <= 25", OPS)),
        solver.into_check(Check::new("gadgets", Some(4), "hitting solver on P(l) matches exact traversal, l <= 25", OPS)),
    ];
    let c = Check::new("gadgets", Some(4), "printed constant -2/3 is inconsistent with the recursion", OPS);
    out.push(c.outcome(
        shifted_matches.is_empty(),
        None,
        format!("the -2/3 form matches at l in {shifted_matches:?}"),
    ));
    let c = Check::new("gadgets", Some(4), "slow path constant discrepancy", OPS).informational();
    out.push(match slow_path_report(1) {
        Ok(r) => {
            let (t, s) = (r.traversal.to_f64().unwrap_or(f64::NAN), r.shifted_form.to_f64().unwrap_or(f64::NAN));
            c.outcome(
                true,
                None,
                format!("l=1: recursion gives {t}, the closed form with -2/3 gives {s}; -5/3 is consistent"),
            )
        }
        Err(e) => c.error(e),
    });
    let c = Check::new("gadgets", Some(4), "steep hill shape", OPS);
    out.push(match steep_hill(5) {
        Ok(h) => {
            let (bottom, top) = (h.port("bottom").unwrap_or(0), h.port("top").unwrap_or(0));
            let ok = h.graph.n() == 6
                && h.graph.edge_count() == 10
                && h.graph.bfs_distances(bottom)[top] == Some(5)
                && h.graph.connectivity() == Connectivity::StronglyConnected;
            c.outcome(ok, None, format!("H(5): {} vertices, {} arcs", h.graph.n(), h.graph.edge_count()))
        }
        Err(e) => c.error(e),
    });
    out
}

fn leaving_time_bounds() -> Vec<Check> {
    const OPS: &[&str] = &["bound_report", "optimal_hitting_policy"];
    let lib = library();
    let rows: Vec<(Tally, Tally)> = lib
        .par_iter()
        .map(|(id, g)| {
            let mut pair = Tally::new();
            let mut uniform = Tally::new();
            for eps in [0.25, 0.5] {
                match bound_report(g, eps) {
                    Ok(r) => {
                        let worst = r
                            .pairs
                            .iter()
                            .map(|p| (p.stationary_bound - p.hitting) / p.stationary_bound)
                            .fold(f64::INFINITY, f64::min);
                        pair.record(r.pairwise_holds, worst, || format!("{id} eps={eps}"));
                        let us = (r.uniform_bound - r.biased_t_hit) / r.uniform_bound;
                        uniform.record(r.uniform_holds, us, || format!("{id} eps={eps}"));
                    }
                    Err(e) => {
                        pair.record(false, f64::NAN, || format!("{id}: {e}"));
                        uniform.record(false, f64::NAN, || format!("{id}: {e}"));
                    }
                }
            }
            (pair, uniform)
        })
        .collect();
    let (pair, uniform) = rows
        .into_iter()
        .fold((Tally::new(), Tally::new()), |(a, b), (x, y)| (a.merge(x), b.merge(y)));
    vec![
        pair.into_check(Check::new("hitting", Some(5), "H(x,y) <= 16 pi(y)^(eps-1) t_mix on the library", OPS)),
        uniform.into_check(Check::new(
            "hitting",
            Some(5),
            "max H <= 120 (n d_avg/d_min)^(1-eps) t_mix^((2+eps)/3) on the library",
            OPS,
        )),
    ]
}

fn cover_against_enumeration(seed: u64) -> Vec<Check> {
    const OPS: &[&str] = &["optimal_cover_policy"];
    let graphs = all_connected(2, 5);
    let t = graphs
        .par_iter()
        .map(|g| {
            let mut t = Tally::new();
            for eps in [0.25, 0.5] {
                for u in 0..g.n() {
                    let want = oracle::cover_by_enumeration(g, u, eps);
                    match optimal_cover_policy(g, u, eps) {
                        Ok(p) => {
                            let v = p.value(u, 1 << u).unwrap_or(f64::NAN);
                            let rel = (v - want).abs() / want.max(1.0);
                            t.record(rel <= 1e-9, -rel, || format!("edges={:?} u={u} eps={eps}: {v} vs {want}", g.edges()));
                        }
                        Err(e) => t.record(false, f64::NAN, || format!("edges={:?}: {e}", g.edges())),
                    }
                }
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    let mut out = vec![t.into_check(Check::new(
        "cover",
        Some(6),
        "cover DP equals policy enumeration on all connected graphs n <= 5",
        OPS,
    ))];

    let k3 = fam(GraphFamily::Complete(3));
    let c = Check::new("cover", Some(6), "triangle cover value 2.6 at eps = 1/4", OPS);
    out.push(match optimal_cover_policy(&k3, 0, 0.25) {
        Ok(p) => {
            let v = p.value(0, 1).unwrap_or(f64::NAN);
            c.outcome((v - 2.6).abs() < 1e-9, Some(-(v - 2.6).abs()), format!("value {v}"))
        }
        Err(e) => c.error(e),
    });

    for (f, eps) in [(GraphFamily::Complete(3), 0.25), (GraphFamily::Cycle(5), 0.5), (GraphFamily::Star { leaves: 3 }, 0.5)] {
        let g = fam(f.clone());
        let c = Check::new("cover", Some(6), format!("Monte Carlo replay of the cover policy on {}", f.id()), &["estimate", "simulate"]);
        out.push(match optimal_cover_policy(&g, 0, eps) {
            Ok(p) => {
                let v = p.value(0, 1).unwrap_or(f64::NAN);
                match estimate(&g, 0, Strategy::Cover(&p), eps, Stop::Cover, 100_000, seed) {
                    Ok(e) => {
                        let z = (e.mean - v).abs() / e.se;
                        c.outcome(e.within(v, 3.0), Some(3.0 - z), format!("mean {:.4} (se {:.4}) vs {v:.6} at eps={eps}", e.mean, e.se))
                    }
                    Err(err) => c.error(err),
                }
            }
            Err(err) => c.error(err),
        });
    }
    out
}

fn cover_decisions() -> Vec<Check> {
    const OPS: &[&str] = &["cost_decision", "best_step", "next_step", "optimal_cover_policy"];
    let mut t = Tally::new();
    for f in [GraphFamily::Complete(3), GraphFamily::Cycle(5), GraphFamily::Path(4), GraphFamily::Star { leaves: 3 }] {
        let g = fam(f.clone());
        let n = g.n();
        let eps = 0.25;
        // Visited sets containing 0 that induce connected subgraphs.
        for mask in (1u64..1 << n).filter(|m| m & 1 == 1) {
            let x = VertexSet::from_mask(n, mask);
            if !g.induces_connected(&x) || x.len() == n {
                continue;
            }
            let policy = match biaswalk_core::strategy::cover_policy_from(&g, &x, eps) {
                Ok(p) => p,
                Err(e) => {
                    t.record(false, f64::NAN, || format!("{}: {e}", f.id()));
                    continue;
                }
            };
            let tag = |what: &str| format!("{} X={mask:b} {what}", f.id());
            for u in x.iter() {
                let v = policy.value(u, mask as u32).unwrap_or(f64::NAN);
                let below = cost_decision(&g, u, &x, v + 1e-6, eps).unwrap_or(false);
                let at = cost_decision(&g, u, &x, v, eps).unwrap_or(true);
                t.record(below && !at, 0.0, || tag("cost decision"));
                match next_step(&g, u, &x, eps) {
                    Ok(row) => {
                        let pick = row.iter().find(|(_, w)| *w == 1.0).map(|&(y, _)| y);
                        t.record(pick == policy.choice(u, mask as u32), 0.0, || tag("next step"));
                    }
                    Err(e) => t.record(false, f64::NAN, || format!("{}: {e}", tag("next step"))),
                }
            }
            let frontier: Vec<usize> =
                (0..n).filter(|&w| !x.contains(w) && x.iter().any(|v| g.has_edge(v, w))).collect();
            for &y in &frontier {
                for &z in &frontier {
                    let vy = policy.value(y, (mask | 1 << y) as u32).unwrap_or(f64::NAN);
                    let vz = policy.value(z, (mask | 1 << z) as u32).unwrap_or(f64::NAN);
                    let want = vy < vz - 1e-9 * vz.abs().max(1.0);
                    let got = best_step(&g, &x, y, z, eps);
                    t.record(got.as_ref().ok() == Some(&want), 0.0, || tag(&format!("best step {y} vs {z}")));
                }
            }
        }
    }
    vec![t.into_check(Check::new("cover", None, "cost, best-step and next-step queries agree with the DP", OPS))]
}

fn kernel_sanity(seed: u64) -> Vec<Check> {
    const OPS: &[&str] = &["srw_kernel", "lazy_kernel", "brw_kernel", "stationary", "spectral_profile", "generate"];
    let mut rng = substream(seed, 20);
    let mut t = Tally::new();
    for (id, g) in library() {
        let b = random_point_masses(&g, &mut rng);
        let kernels = srw_kernel(&g).and_then(|k| Ok(vec![lazy_kernel(&k), brw_kernel(&g, 0.3, &b)?, k]));
        let kernels = match kernels {
            Ok(k) => k,
            Err(e) => {
                t.record(false, f64::NAN, || format!("{id}: {e}"));
                continue;
            }
        };
        for k in &kernels {
            let rows = (0..k.n()).map(|x| (k.row(x).iter().sum::<f64>() - 1.0).abs()).fold(0.0f64, f64::max);
            t.record(rows <= 1e-12, -rows, || format!("{id}: row sum error {rows}"));
            match stationary(k) {
                Ok(pi) => {
                    let next = k.step(&pi);
                    let res = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
                    t.record(res <= 1e-10, -res, || format!("{id}: stationary residual {res}"));
                }
                Err(e) => t.record(false, f64::NAN, || format!("{id}: {e}")),
            }
        }
        match spectral_profile(&g) {
            Ok(p) => t.record(p.t_mix >= 1 && p.t_sep < usize::MAX && p.t_inf < usize::MAX, 0.0, || format!("{id}: {p:?}")),
            Err(e) => t.record(false, f64::NAN, || format!("{id}: {e}")),
        }
    }
    let mut pure = Tally::new();
    for f in [GraphFamily::Gnp { n: 12, p: 0.3, seed }, GraphFamily::Ring { units: 3, d: 2 }, GraphFamily::Petersen] {
        let a = crate::io::graph_to_json(&fam(f.clone())).to_string();
        let b = crate::io::graph_to_json(&fam(f.clone())).to_string();
        pure.record(a == b, 0.0, || f.id());
    }
    for units in 2..=16 {
        for d in 1..=5 {
            let g = fam(GraphFamily::Ring { units, d });
            let s = g.degree_stats();
            let ok = s.d_min == d + 1 && s.d_max == d + 1 && g.connectivity() == Connectivity::Connected;
            pure.record(ok, 0.0, || format!("ring({units},{d})"));
        }
    }
    vec![
        t.into_check(Check::new("hitting", None, "kernels are stochastic and stationary laws are fixed points", OPS)),
        pure.into_check(Check::new("hitting", None, "generation is deterministic; rings are regular and connected", OPS)),
    ]
}

fn small_graph_bounds() -> Vec<Check> {
    let graphs = all_connected(2, 8);
    let t = graphs
        .par_iter()
        .map(|g| {
            let mut t = Tally::new();
            for eps in [0.25, 0.5] {
                match bound_report(g, eps) {
                    Ok(r) => t.record(r.pairwise_holds && r.uniform_holds, 0.0, || format!("edges={:?} eps={eps}", g.edges())),
                    Err(e) => t.record(false, f64::NAN, || format!("edges={:?}: {e}", g.edges())),
                }
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    vec![t.into_check(Check::new(
        "hitting",
        None,
        "both leaving-time bounds on all connected graphs n <= 8",
        &["bound_report"],
    ))]
}

fn hitting_monotone() -> Vec<Check> {
    let graphs = all_connected(2, 5);
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let t = graphs
        .par_iter()
        .map(|g| {
            let mut t = Tally::new();
            for y in 0..g.n() {
                let target = VertexSet::singleton(g.n(), y);
                let vals: Result<Vec<Vec<f64>>, _> =
                    grid.iter().map(|&e| optimal_hitting_policy(g, &target, e).map(|h| h.values)).collect();
                match vals {
                    Ok(v) => {
                        for w in v.windows(2) {
                            let worst = (0..g.n()).map(|x| w[0][x] - w[1][x]).fold(f64::INFINITY, f64::min);
                            t.record(worst >= -1e-10, worst, || format!("edges={:?} target={y}", g.edges()));
                        }
                    }
                    Err(e) => t.record(false, f64::NAN, || format!("edges={:?}: {e}", g.edges())),
                }
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    vec![t.into_check(Check::new(
        "hitting",
        None,
        "optimal hitting times are non-increasing over eps in {0, 1/4, 1/2, 3/4, 1}",
        &["optimal_hitting_policy"],
    ))]
}

/// Perturbs the optimal cover policy towards random bias rows and checks the
/// perturbed value never beats the DP.
fn randomized_cover(seed: u64) -> Vec<Check> {
    let mut graphs: Vec<Graph> = vec![
        fam(GraphFamily::Cycle(5)),
        fam(GraphFamily::Complete(4)),
        fam(GraphFamily::Star { leaves: 3 }),
        fam(GraphFamily::Path(4)),
    ];
    graphs.extend((0..6u64).map(|i| connected_gnp(5, 0.5, seed ^ (i << 40))));
    let samples: Vec<(usize, f64, u64)> = {
        let mut rng = substream(seed, 53);
        (0..1000).map(|i| (i % graphs.len(), [0.25, 0.5][i % 2], rng.random())).collect()
    };
    let t = samples
        .par_iter()
        .map(|&(gi, eps, s)| {
            let g = &graphs[gi];
            let mut t = Tally::new();
            let policy = match optimal_cover_policy(g, 0, eps) {
                Ok(p) => p,
                Err(e) => {
                    t.record(false, f64::NAN, || e.to_string());
                    return t;
                }
            };
            let best = policy.value(0, 1).unwrap_or(f64::NAN);
            let mut rng = substream(s, 0);
            let theta: f64 = rng.random();
            // One random row per (visited set, vertex), drawn up front so the
            // evaluation is a pure function.
            let mut rows = std::collections::HashMap::new();
            for mask in 1u64..1 << g.n() {
                for v in (0..g.n()).filter(|v| mask >> v & 1 == 1) {
                    let raw: Vec<f64> = (0..g.degree(v)).map(|_| rng.random::<f64>()).collect();
                    let total: f64 = raw.iter().sum();
                    let pick = policy.choice(v, mask as u32);
                    let row: Vec<f64> = g
                        .neighbours(v)
                        .iter()
                        .zip(&raw)
                        .map(|(&y, r)| theta * r / total + if Some(y) == pick { 1.0 - theta } else { 0.0 })
                        .collect();
                    rows.insert((mask, v), row);
                }
            }
            let value = oracle::cover_value_with_rows(g, 0, eps, &|m, v| {
                rows.get(&(m, v)).cloned().unwrap_or_else(|| vec![1.0 / g.degree(v) as f64; g.degree(v)])
            });
            match value {
                Some(v) => t.record(v >= best - 1e-9, v - best, || format!("edges={:?} eps={eps}: {v} < {best}", g.edges())),
                None => t.record(false, f64::NAN, || "singular system".into()),
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    vec![t.into_check(Check::new(
        "cover",
        None,
        "1000 randomized per-set bias perturbations never beat the cover DP",
        &["optimal_cover_policy"],
    ))]
}

fn replay_and_determinism(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = substream(seed, 61);
    let graphs = all_connected(3, 5);
    let mut t = Tally::new();
    let mut cases = vec![(figure_one_graph(), 0, TrajectoryPredicate::at_set(VertexSet::from_iter(6, [4, 5]), 2), 1.0 / 3.0)];
    for i in 0..12 {
        let g = graphs[rng.random_range(0..graphs.len())].clone();
        let n = g.n();
        let set = small_sets(n)[rng.random_range(0..n)].clone();
        let h = rng.random_range(1..=5);
        let pred = if i % 2 == 0 { TrajectoryPredicate::at_set(set, h) } else { TrajectoryPredicate::hit_by(set, h) };
        cases.push((g, rng.random_range(0..n), pred, [0.1, 1.0 / 3.0, 0.5][i % 3]));
    }
    for (k, (g, u, pred, eps)) in cases.iter().enumerate() {
        let r = trajectory_boost(g, *u, pred, eps).and_then(|b| {
            let e = biaswalk_core::sim::estimate_event(g, *u, Strategy::Trajectory(&b.strategy), *eps, pred, 100_000, seed + k as u64)?;
            Ok((b.q, e))
        });
        match r {
            Ok((q, e)) => {
                let z = if e.se > 0.0 { (e.mean - q).abs() / e.se } else { 0.0 };
                t.record(e.within(q, 3.0), 3.0 - z, || format!("case {k}: {pred:?} q={q} est={e:?}"));
            }
            Err(e) => t.record(false, f64::NAN, || format!("case {k}: {e}")),
        }
    }
    out.push(t.into_check(Check::new(
        "simulation",
        None,
        "simulated time-biased strategies hit their optimal probability within 3 SE (100000 walks)",
        &["simulate", "estimate"],
    )));

    let mut t = Tally::new();
    for (id, g) in library() {
        let p = optimal_cover_policy(&g, 0, 0.5).ok();
        let strategy = p.as_ref().map_or(Strategy::None, Strategy::Cover);
        let a = simulate(&g, 0, strategy, 0.5, Stop::Cover, seed);
        let b = simulate(&g, 0, strategy, 0.5, Stop::Cover, seed);
        t.record(a.is_ok() && a == b, 0.0, || format!("{id}: traces differ"));
        match phase_cover_strategy(&g, 0, 0.5, seed) {
            Ok(tr) => t.record(tr.unvisited_after(g.n(), tr.steps()) == 0, 0.0, || format!("{id}: phase walk did not cover")),
            Err(e) => t.record(false, f64::NAN, || format!("{id}: {e}")),
        }
    }
    let k2 = fam(GraphFamily::Path(2));
    let pred = TrajectoryPredicate::at_set(VertexSet::singleton(2, 1), 1);
    match biaswalk_core::sim::estimate_event(&k2, 0, Strategy::None, 0.0, &pred, 10_000, seed) {
        Ok(e) => t.record(e.within(1.0, 3.0), 0.0, || format!("K2 calibration {e:?}")),
        Err(e) => t.record(false, f64::NAN, || e.to_string()),
    }
    out.push(t.into_check(Check::new(
        "simulation",
        None,
        "seeded traces repeat exactly; phase walks cover the library within the step guard",
        &["simulate", "phase_cover_strategy"],
    )));
    out
}

fn hitting_against_enumeration() -> Vec<Check> {
    const OPS: &[&str] = &["optimal_hitting_policy"];
    let graphs = all_connected(2, 6);
    let t = graphs
        .par_iter()
        .map(|g| {
            let n = g.n();
            let mut t = Tally::new();
            let targets: Vec<VertexSet> =
                if n <= 5 { small_sets(n) } else { (0..n).map(|v| VertexSet::singleton(n, v)).collect() };
            for eps in [0.25, 0.5] {
                for target in &targets {
                    let want = oracle::hitting_by_enumeration(g, target, eps);
                    match optimal_hitting_policy(g, target, eps) {
                        Ok(h) => {
                            let gap = (0..n)
                                .map(|v| (h.values[v] - want[v]).abs() / want[v].max(1.0))
                                .fold(0.0f64, f64::max);
                            t.record(gap <= 1e-9, -gap, || {
                                format!("edges={:?} target={:?} eps={eps}", g.edges(), target.iter().collect::<Vec<_>>())
                            });
                        }
                        Err(e) => t.record(false, f64::NAN, || format!("edges={:?}: {e}", g.edges())),
                    }
                }
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    vec![t.into_check(Check::new(
        "hitting",
        Some(7),
        "policy iteration equals bias-matrix enumeration on all connected graphs n <= 6",
        OPS,
    ))]
}

fn graph_basics() -> Vec<Check> {
    const OPS: &[&str] = &[
        "generate",
        "degree_stats",
        "connectivity",
        "bfs_distances",
        "srw_kernel",
        "lazy_kernel",
        "stationary",
        "spectral_profile",
        "hitting_times_srw",
    ];
    let mut t = Tally::new();
    for (id, g) in library() {
        let s = g.degree_stats();
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        t.record(total == 2 * s.m, 0.0, || format!("{id}: handshake"));
        t.record(g.connectivity() == Connectivity::Connected, 0.0, || format!("{id}: connectivity"));
        let d = g.bfs_distances(0);
        let edges_ok = g.edges().iter().all(|&(u, v)| match (d[u], d[v]) {
            (Some(a), Some(b)) => a.abs_diff(b) <= 1,
            _ => false,
        });
        t.record(edges_ok, 0.0, || format!("{id}: bfs distances"));
        match srw_kernel(&g).and_then(|k| stationary(&lazy_kernel(&k))) {
            Ok(pi) => {
                let gap = (0..g.n())
                    .map(|v| (pi[v] - g.degree(v) as f64 / total as f64).abs())
                    .fold(0.0f64, f64::max);
                t.record(gap < 1e-12, -gap, || format!("{id}: stationary gap {gap}"));
            }
            Err(e) => t.record(false, f64::NAN, || format!("{id}: {e}")),
        }
    }
    for n in 3..=8 {
        let p = spectral_profile(&fam(GraphFamily::Complete(n)));
        let want = 1.0 / (n - 1) as f64;
        let ok = p.map(|p| (p.lambda_star - want).abs() < 1e-12).unwrap_or(false);
        t.record(ok, 0.0, || format!("complete({n}): lambda_star"));
        let path = fam(GraphFamily::Path(n));
        let h = hitting_times_srw(&path, &VertexSet::singleton(n, n - 1)).map(|h| h[0]).unwrap_or(f64::NAN);
        let want = ((n - 1) * (n - 1)) as f64;
        t.record(rel_close(h, want, 1e-10), 0.0, || format!("path({n}): hitting {h} vs {want}"));
    }
    vec![t.into_check(Check::new("hitting", None, "graph library invariants and closed forms", OPS))]
}

fn emulation(seed: u64) -> Vec<Check> {
    const OPS: &[&str] = &["emulate_weights", "weighted_walk_kernel", "brw_kernel"];
    let mut rng = substream(seed, 8);
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for i in 0..60 {
        let n = 2 + i % 7;
        graphs.push((format!("tree #{i}"), random_tree(n, &mut rng)));
    }
    for i in 0..60u64 {
        let n = 3 + (i % 6) as usize;
        graphs.push((format!("gnp #{i}"), connected_gnp(n, 0.5, seed ^ (i << 20))));
    }
    let mut t = Tally::new();
    let mut ratio = Tally::new();
    for (id, g) in &graphs {
        for a in [-0.5, 0.5, 1.0] {
            let e0 = emulation_threshold(a);
            for anchor in [0, g.n() - 1] {
                let scheme = match WeightScheme::new(g, anchor, a) {
                    Ok(s) => s,
                    Err(e) => {
                        t.record(false, f64::NAN, || format!("{id}: {e}"));
                        continue;
                    }
                };
                // Closed-form stationary law of the weighted walk.
                let pi = weighted_walk_kernel(g, &scheme).and_then(|k| stationary(&k));
                let want = scheme.closed_form_stationary(g);
                let gap = pi.map(|p| p.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
                ratio.record(gap.as_ref().is_ok_and(|&g| g < 1e-12), 0.0, || format!("{id} a={a}"));
                for eps in [e0, (1.0 + e0) / 2.0] {
                    match emulation_gap(g, &scheme, eps) {
                        Ok(gap) => t.record(gap < 1e-12, -gap, || format!("{id} a={a} eps={eps} gap={gap}")),
                        Err(e) => t.record(false, f64::NAN, || format!("{id} a={a} eps={eps}: {e}")),
                    }
                }
                let below = emulate_weights(g, &scheme, e0 * 0.9 - 1e-3);
                t.record(below.is_err(), 0.0, || format!("{id} a={a}: accepted a bias below threshold"));
            }
        }
    }
    vec![
        t.into_check(Check::new(
            "stationary",
            Some(8),
            "emulated kernel equals the weighted walk on random trees and graphs n <= 8",
            OPS,
        )),
        ratio.into_check(Check::new("stationary", Some(8), "weighted walk stationary law matches w(x)/2W", OPS)),
    ]
}

fn stationary_lower_bound() -> Vec<Check> {
    const OPS: &[&str] = &["azarconj_check", "max_stationary"];
    let lib = library();
    let t = lib
        .par_iter()
        .map(|(id, g)| {
            let mut t = Tally::new();
            for eps in [0.25, 0.5] {
                for v in 0..g.n() {
                    match azarconj_check(g, v, eps) {
                        Ok(r) => t.record(r.holds, (r.pi_q - r.bound) / r.bound, || format!("{id} v={v} eps={eps}: {r:?}")),
                        Err(e) => t.record(false, f64::NAN, || format!("{id} v={v}: {e}")),
                    }
                }
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    vec![t.into_check(Check::new(
        "stationary",
        Some(9),
        "max stationary mass >= pi^(1-eps+delta) on every library vertex",
        OPS,
    ))]
}

fn counterexamples(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let k2 = fam(GraphFamily::Path(2));
    let mut t = Tally::new();
    for i in 0..=20 {
        let eps = i as f64 / 20.0;
        for v in 0..2 {
            match max_stationary(&k2, v, eps) {
                Ok((p, _)) => t.record((p - 0.5).abs() <= 1e-15, -(p - 0.5).abs(), || format!("eps={eps} v={v}: {p}")),
                Err(e) => t.record(false, f64::NAN, || format!("eps={eps}: {e}")),
            }
        }
    }
    out.push(t.into_check(Check::new("stationary", Some(10), "K2 stationary mass stays 1/2 for every bias", &["max_stationary"])));

    let mut dense: Vec<(String, Graph)> = vec![
        ("complete(4)".into(), fam(GraphFamily::Complete(4))),
        ("bipartite(4,4)".into(), fam(GraphFamily::CompleteBipartite(4, 4))),
    ];
    for i in 0..24u64 {
        let n = 5 + (i % 4) as usize;
        let g = connected_gnp(n, 0.8, seed ^ (i << 24));
        if 2 * g.degree_stats().d_min >= n {
            dense.push((format!("gnp({n},0.8) #{i}"), g));
        }
    }
    let mut t = Tally::new();
    for (id, g) in &dense {
        let alpha = g.degree_stats().d_min as f64 / g.n() as f64;
        for beta in [0.25, 0.5, 1.0, 2.0] {
            match dense_no_boost_check(g, alpha, beta) {
                Ok(r) => t.record(r.holds, (r.factor - r.worst_ratio) / r.factor, || format!("{id} beta={beta}: {r:?}")),
                Err(e) => t.record(false, f64::NAN, || format!("{id} beta={beta}: {e}")),
            }
        }
    }
    out.push(t.into_check(Check::new(
        "stationary",
        Some(10),
        format!("dense graphs gain at most (1+beta)/alpha^2 ({} graphs)", dense.len()),
        &["dense_no_boost_check"],
    )));

    let mut rng = substream(seed, 10);
    let mut graphs: Vec<(String, Graph)> = library().into_iter().filter(|(_, g)| g.n() <= 12).collect();
    for i in 0..20u64 {
        graphs.push((format!("gnp #{i}"), connected_gnp(4 + (i % 5) as usize, 0.5, seed ^ (i << 28))));
    }
    let mut t = Tally::new();
    for (id, g) in &graphs {
        for eps in [0.1, 0.25, 0.5] {
            let mut biases = vec![BiasMatrix::uniform(g).expect("graph has no sinks")];
            biases.extend((0..3).map(|_| random_point_masses(g, &mut rng)));
            for b in &biases {
                let r = brw_kernel(g, eps, b).and_then(|k| simple_walk_sandwich(g, &k));
                match r {
                    Ok(s) => {
                        let slack = (0..g.n())
                            .map(|x| (s.pi_q[x] - s.lower[x]).min(s.upper[x] - s.pi_q[x]))
                            .fold(f64::INFINITY, f64::min);
                        t.record(s.holds, slack, || format!("{id} eps={eps}: {s:?}"));
                    }
                    Err(e) => t.record(false, f64::NAN, || format!("{id} eps={eps}: {e}")),
                }
            }
        }
    }
    out.push(t.into_check(Check::new(
        "stationary",
        Some(10),
        "stationary sandwich for biased walks on library and random graphs",
        &["simple_walk_sandwich", "brw_kernel"],
    )));
    out
}

fn scheme_boost() -> Check {
    let c = Check::new("stationary", None, "anchored scheme boost on small graphs", &["boost_stationary_scheme"]).informational();
    let mut rows = Vec::new();
    for f in [GraphFamily::Petersen, GraphFamily::BinaryTree { depth: 3 }, GraphFamily::Ring { units: 2, d: 3 }] {
        for eps in [0.25, 0.5] {
            match boost_stationary_scheme(&fam(f.clone()), 0, eps) {
                Ok(r) => rows.push(format!(
                    "{} eps={eps}: pi {:.4} -> {:.4}, bound {:.4}, eps~ {:.3}, holds {}",
                    f.id(),
                    r.pi,
                    r.pi_q,
                    r.bound,
                    r.eps_tilde,
                    r.holds
                )),
                Err(e) => return c.error(e),
            }
        }
    }
    c.outcome(true, None, rows.join("; "))
}

fn gadget_certificates() -> Vec<Check> {
    let mut out = Vec::new();
    let quarter = rational(1, 4);
    let mut t = Tally::new();
    let mut mdp = Tally::new();
    for l in (1..=25).step_by(2) {
        let bound = BigRational::from_integer(1.into()) - num_traits::pow(rational(99, 100), l);
        match quincunx_success(l, &quarter) {
            Ok(p) => {
                let slack = (p.clone() - bound.clone()).to_f64().unwrap_or(f64::NAN);
                t.record(p >= bound, slack, || format!("l={l}: {p}"));
                let pf = p.to_f64().unwrap_or(f64::NAN);
                match quincunx_optimum(l, GADGET_EPS) {
                    Ok(opt) => mdp.record((opt - pf).abs() < 1e-12, -(opt - pf).abs(), || format!("l={l}: MDP {opt} vs {pf}")),
                    Err(e) => mdp.record(false, f64::NAN, || format!("l={l}: {e}")),
                }
            }
            Err(e) => t.record(false, f64::NAN, || format!("l={l}: {e}")),
        }
    }
    out.push(t.into_check(Check::new(
        "gadgets",
        Some(11),
        "quincunx left-exit probability >= 1 - 0.99^l, odd l <= 25",
        &["quincunx_success"],
    )));
    out.push(mdp.into_check(Check::new(
        "gadgets",
        Some(11),
        "optimal control of Q(l) equals the always-left binomial probability",
        &["quincunx"],
    )));

    let mut t = Tally::new();
    for l in 1..=6 {
        for k in 2..=4 {
            match octopus_stats(l, k) {
                Ok(s) => {
                    let slack = (14.0 - s.residence).min(s.nexus_bound - s.nexus_prob);
                    t.record(s.holds, slack, || format!("S({l},{k}): {s:?}"));
                }
                Err(e) => t.record(false, f64::NAN, || format!("S({l},{k}): {e}")),
            }
        }
    }
    out.push(t.into_check(Check::new(
        "gadgets",
        Some(11),
        "star connector residence < 14 and nexus probability < (13/14)^l, l <= 6, k <= 4",
        &["octopus_stats", "star_connector"],
    )));

    let k3 = fam(GraphFamily::Cycle(3));
    let c = Check::new("gadgets", Some(11), "Hamilton reduction of K3 with c = 1: crossing window", &["hamilton_reduction"]);
    out.push(match (hamilton_reduction(&k3, 1), hamilton_crossing_check(&k3, 1, GADGET_EPS)) {
        (Ok(h), Ok(r)) => {
            let slack = (r.min_escape - r.lower).min(r.upper - r.max_crossing);
            c.outcome(
                r.holds && h.graph.n() == 135,
                Some(slack),
                format!(
                    "{} vertices; escape {:.3} >= {}, crossing {:.3} <= {}",
                    h.graph.n(),
                    r.min_escape,
                    r.lower,
                    r.max_crossing,
                    r.upper
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => c.error(e),
    });
    out
}

/// Instance with three clauses over four variables drawn in the reduction's
/// figure.
pub fn sample_formula() -> QsatInstance {
    QsatInstance::new(4, vec![[-1, 2, -3], [1, -2, 4], [1, 3, -4]]).expect("valid formula")
}

fn gadget_constructions() -> Vec<Check> {
    let mut out = Vec::new();
    let c = Check::new("gadgets", None, "gadget shapes and connectivity", &["quincunx", "star_connector", "roundabout"]);
    let shapes = (|| -> biaswalk_core::Result<String> {
        let q = quincunx(3)?;
        let s = star_connector(3, 3)?;
        let r = roundabout(3, 3, 3)?;
        let entrance = q.port("entrance").expect("entrance");
        let exit = q.port("left_exit").expect("left exit");
        let ok = q.graph.n() == 12
            && q.graph.bfs_distances(entrance)[exit] == Some(4)
            && s.graph.connectivity() == Connectivity::StronglyConnected
            && r.graph.n() == 48
            && r.unvisited.as_ref().map(VertexSet::len) == Some(15)
            && (1..=9).step_by(2).all(|l| quincunx(l).is_ok_and(|q| is_dag(&q.graph)))
            && steep_hill(4)?.graph.connectivity() == Connectivity::StronglyConnected
            && hamilton_reduction(&fam(GraphFamily::Cycle(4)), 1)?.graph.connectivity() == Connectivity::Connected;
        Ok(if ok { String::new() } else { format!("Q(3) {} S(3,3) {} R(3,3,3) {}", q.graph.n(), s.graph.n(), r.graph.n()) })
    })();
    out.push(match shapes {
        Ok(msg) if msg.is_empty() => c.outcome(true, None, "Q(3) 12 vertices crossed in 4 steps; S(3,3) strongly connected; R(3,3,3) 48 vertices"),
        Ok(msg) => c.outcome(false, None, msg),
        Err(e) => c.error(e),
    });

    let phi = sample_formula();
    let c = Check::new("gadgets", None, "QSAT graph of the sample formula", &["qsat_graph"]);
    out.push(match qsat_graph(&phi, 2, 3, 2) {
        Ok(g) => {
            let r = phi.clause_count();
            let ok = g.graph.connectivity() == Connectivity::StronglyConnected
                && g.quincunx_count() == 6 * r + phi.n()
                && g.ports["star_ports"].len() == 6 * r;
            c.outcome(ok, None, format!("{} vertices, {} quincunxes", g.graph.n(), g.quincunx_count()))
        }
        Err(e) => c.error(e),
    });

    out
}

fn is_dag(g: &Graph) -> bool {
    let n = g.n();
    let mut indeg = vec![0usize; n];
    for v in 0..n {
        for &w in g.neighbours(v) {
            indeg[w] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in g.neighbours(v) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

fn dispatch_smoke() -> Vec<Check> {
    let c = Check::new("gadgets", None, "command dispatch of gadget certification", &["dispatch"]);
    let args = ["biaswalk", "gadget", "--family", "slowpath", "--l", "1", "--certify"];
    vec![match crate::commands::execute(args) {
        Ok(text) => {
            let ok = text.contains("\"traversal\": 4.2") && text.contains("note");
            c.outcome(ok, None, "slowpath --l 1 --certify reports 4.2 and the constant note")
        }
        Err(e) => c.error(e),
    }]
}

fn lazy_convergence(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let graphs = all_connected(2, 8);
    let t = graphs
        .par_iter()
        .map(|g| {
            let mut t = Tally::new();
            match lazyconv_audit(g) {
                Ok(a) => {
                    let slack = a.window as f64 - a.worst_t as f64;
                    t.record(a.failures.is_empty(), slack, || format!("edges={:?}: {:?}", g.edges(), a.failures));
                }
                Err(e) => t.record(false, f64::NAN, || format!("edges={:?}: {e}", g.edges())),
            }
            t
        })
        .reduce(Tally::new, Tally::merge);
    out.push(t.into_check(Check::new(
        "simulation",
        Some(12),
        "lazy walk reaches pi(S)/3 within 4 t_rel ln n for every (x,S), all connected graphs n <= 8",
        &["lazyconv_check"],
    )));

    let mut t = Tally::new();
    for f in [GraphFamily::Cycle(8), GraphFamily::Petersen, GraphFamily::Star { leaves: 5 }] {
        let g = fam(f.clone());
        let n = g.n();
        let all_but_start = VertexSet::singleton(n, 0).complement();
        for s in [VertexSet::singleton(n, n - 1), all_but_start, VertexSet::full(n)] {
            for x in 0..n {
                match lazyconv_check(&g, x, &s) {
                    Ok((_, ok)) => t.record(ok, 0.0, || format!("{} x={x}", f.id())),
                    Err(e) => t.record(false, f64::NAN, || format!("{}: {e}", f.id())),
                }
            }
        }
    }
    out.push(t.into_check(Check::new("simulation", Some(12), "single-pair lazy convergence queries", &["lazyconv_check"])));

    let mut t = Tally::new();
    for f in [GraphFamily::Cycle(8), GraphFamily::Path(6), GraphFamily::Petersen] {
        let g = fam(f.clone());
        match vacant_profile(&g, 0, &[0, 1, 2, 3], seed, 10_000) {
            Ok(rows) => {
                for r in rows {
                    let slack = (r.bound - r.estimate.mean) + 3.0 * r.estimate.se;
                    t.record(!r.flagged, slack, || format!("{} x={}: {:?}", f.id(), r.x, r.estimate));
                }
            }
            Err(e) => t.record(false, f64::NAN, || format!("{}: {e}", f.id())),
        }
    }
    out.push(t.into_check(Check::new(
        "simulation",
        Some(12),
        "unvisited count after 2x t_hit steps stays below n/2^x within 3 SE",
        &["vacant_profile"],
    )));
    out
}

fn ring_trend() -> Vec<Check> {
    const OPS: &[&str] = &["max_stationary", "stationary", "srw_kernel"];
    let data: Vec<biaswalk_core::Result<(f64, f64)>> = [2, 4, 8]
        .par_iter()
        .map(|&units| {
            let g = fam(GraphFamily::Ring { units, d: 3 });
            let pi = stationary(&srw_kernel(&g)?)?;
            let ratios: Vec<f64> =
                (0..g.n()).map(|v| Ok(max_stationary(&g, v, 0.25)?.0 / pi[v])).collect::<biaswalk_core::Result<_>>()?;
            Ok((ratios[0], ratios.iter().copied().fold(0.0, f64::max)))
        })
        .collect();
    let mut out = Vec::new();
    for (which, pick) in [("vertex 0", 0usize), ("best vertex", 1)] {
        let c = Check::new("stationary", Some(13), format!("ring(l,3) boost ratio at {which} grows with l"), OPS);
        let vals: Result<Vec<f64>, _> =
            data.iter().map(|r| r.as_ref().map(|&(a, b)| if pick == 0 { a } else { b })).collect();
        out.push(match vals {
            Ok(v) => {
                let inc = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                let ok = inc > 0.0 && v[2] > 2.0;
                c.outcome(ok, Some(inc.min(v[2] - 2.0)), format!("l = 2, 4, 8: {:.4}, {:.4}, {:.4}", v[0], v[1], v[2]))
            }
            Err(e) => c.error(e),
        });
    }
    out
}

fn substitutes(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (f, eps) in [(GraphFamily::Cycle(8), 0.5), (GraphFamily::Path(8), 0.5), (GraphFamily::Petersen, 0.5)] {
        let g = fam(f.clone());
        let c = Check::new(
            "simulation",
            Some(14),
            format!("phase cover strategy beats the simple walk on {} (paired seeds)", f.id()),
            &["phase_cover_strategy", "simulate"],
        );
        let pairs: Result<Vec<(usize, usize)>, _> = (0..1000u64)
            .into_par_iter()
            .map(|r| {
                let s = seed.wrapping_mul(1_000_003).wrapping_add(r);
                let biased = phase_cover_strategy(&g, 0, eps, s)?.steps();
                let plain = simulate(&g, 0, Strategy::None, 0.0, Stop::Cover, s)?.steps();
                Ok::<_, biaswalk_core::Error>((biased, plain))
            })
            .collect();
        out.push(match pairs {
            Ok(p) => {
                let (b, s): (Vec<usize>, Vec<usize>) = p.into_iter().unzip();
                let (mb, ms) = (mean(&b), mean(&s));
                c.outcome(mb <= ms, Some((ms - mb) / ms), format!("mean cover {mb:.2} vs {ms:.2} over 1000 seeds"))
            }
            Err(e) => c.error(e),
        });
    }

    let mut t = Tally::new();
    let mut count = 0;
    for n in [8usize, 10, 12] {
        for p in [0.5, 0.8] {
            for i in 0..4u64 {
                let g = connected_gnp(n, p, seed ^ (n as u64) << 32 ^ i << 16 ^ (p * 10.0) as u64);
                let np = g.degree_stats().d_avg;
                let alpha = (np.ln() / (n as f64).ln()).clamp(1e-3, 1.0);
                let pi = match srw_kernel(&g).and_then(|k| stationary(&k)) {
                    Ok(pi) => pi,
                    Err(e) => {
                        t.record(false, f64::NAN, || e.to_string());
                        continue;
                    }
                };
                count += 1;
                for beta in [0.5, 1.0] {
                    let bound = 3.0 * (1.0f64 + beta).powf(6.0 / alpha);
                    let eps = (beta / np).min(1.0);
                    for (v, &pv) in pi.iter().enumerate() {
                        match max_stationary(&g, v, eps) {
                            Ok((q, _)) => {
                                let r = q / pv;
                                t.record(r <= bound, (bound - r) / bound, || format!("n={n} p={p} v={v}: ratio {r} > {bound}"));
                            }
                            Err(e) => t.record(false, f64::NAN, || e.to_string()),
                        }
                    }
                }
            }
        }
    }
    out.push(t.into_check(Check::new(
        "simulation",
        Some(14),
        format!("sampled G(n,p), n <= 12: bias beta/np boosts by at most 3(1+beta)^(6/alpha) ({count} graphs)"),
        &["max_stationary"],
    )));

    let phi = sample_formula();
    let c = Check::new("simulation", Some(14), "satisfiable and unsatisfiable thresholds are separated", &["tsat_tunsat"]).informational();
    out.push(match tsat_tunsat(&phi, 3) {
        Ok(t) => c.outcome(
            t.t_sat < t.threshold && t.threshold < t.t_unsat,
            Some(t.t_unsat - t.t_sat),
            format!(
                "T_sat {:.4} < {:.4} < T_unsat {:.4}; end-to-end reduction timing is not reproduced, the gadget certifiers substitute",
                t.t_sat, t.threshold, t.t_unsat
            ),
        ),
        Err(e) => c.error(e),
    });
    let c = Check::new("simulation", Some(14), "asymptotic claims replaced by finite substitutes", &[]).informational();
    out.push(c.outcome(
        true,
        None,
        "asymptotic cover bounds carry unknown constants (paired-seed comparison above); the w.h.p. G(n,p) statement \
         is sampled only; reduction timing is covered by the gadget certifiers",
    ));
    out
}

fn mean(xs: &[usize]) -> f64 {
    xs.iter().sum::<usize>() as f64 / xs.len() as f64
}

/// One line per criterion: passed when none of its non-informational checks
/// failed.
pub fn criterion_summary(checks: &[Check], k: u8) -> (bool, String) {
    let mine: Vec<&Check> = checks.iter().filter(|c| c.criterion == Some(k)).collect();
    let failed: Vec<&str> = mine.iter().filter(|c| c.failed()).map(|c| c.name.as_str()).collect();
    let ok = !mine.is_empty() && failed.is_empty();
    let detail = if ok { format!("{} checks", mine.len()) } else { format!("failed: {}", failed.join("; ")) };
    (ok, detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(verify("nope", 0).is_none());
    }

    #[test]
    fn figure_one_checks_pass() {
        for c in criterion(1, 0) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn anticonvexity_suite_is_seeded() {
        let a = serde_json::to_string(&verify("anticonvexity", 42).unwrap()).unwrap();
        let b = serde_json::to_string(&verify("anticonvexity", 42).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("\"passed\":false"));
    }
}
