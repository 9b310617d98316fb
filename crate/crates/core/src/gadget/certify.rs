//! Exact certificates for the gadget properties, all at bias 1/4.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::builder::Builder;
use super::construct::{add_quincunx, add_star, hamilton_reduction};
use super::qsat::QsatInstance;
use crate::bias::Scalar;
use crate::graph::{Graph, VertexSet};
use crate::math::powi;
use crate::strategy::mdp::{FirstPassage, Sense, Succ};
use crate::strategy::optimal_hitting_policy;
use crate::{Error, Result};

/// The bias all gadget certificates are stated for.
pub const GADGET_EPS: f64 = 0.25;

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// First-passage problem on `g` where `terminal[v]` fixes the value of
/// absorbing vertices. Returns the problem and the vertex behind each state.
fn terminal_problem(g: &Graph, terminal: &[Option<f64>], step_cost: f64, sense: Sense) -> (FirstPassage, Vec<usize>) {
    let free: Vec<usize> = (0..g.n()).filter(|&v| terminal[v].is_none()).collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in free.iter().enumerate() {
        index[v] = i;
    }
    let succ = free
        .iter()
        .map(|&v| {
            g.neighbours(v)
                .iter()
                .map(|&y| match terminal[y] {
                    Some(t) => Succ::Fixed(t),
                    None => Succ::State(index[y]),
                })
                .collect()
        })
        .collect();
    (FirstPassage { succ, step_cost, sense }, free)
}

/// Probability of leaving `Q(l)` by the left exit when the controller always
/// biases left: `Pr[Bin(l, (1-ε)/2) < l/2]`.
pub fn quincunx_success<T: Scalar>(l: usize, eps: &T) -> Result<T> {
    if l == 0 || l % 2 == 0 {
        return Err(Error::InvalidParameter(format!("quincunx size {l} must be odd and positive")));
    }
    if *eps < T::zero() || *eps > T::one() {
        return Err(Error::InvalidParameter(format!("bias {eps:?} outside [0,1]")));
    }
    let two = T::one() + T::one();
    let right = (T::one() - eps.clone()) / two;
    let left = T::one() - right.clone();
    let mut binom = T::one();
    let mut total = T::zero();
    for k in 0..=(l - 1) / 2 {
        let mut term = binom.clone();
        for _ in 0..k {
            term = term * right.clone();
        }
        for _ in 0..l - k {
            term = term * left.clone();
        }
        total = total + term;
        let num = T::from_usize(l - k).expect("small count");
        let den = T::from_usize(k + 1).expect("small count");
        binom = binom * num / den;
    }
    Ok(total)
}

/// Best left-exit probability over all controller strategies, by policy
/// iteration on the quincunx graph.
pub fn quincunx_optimum(l: usize, eps: f64) -> Result<f64> {
    if l == 0 || l % 2 == 0 {
        return Err(Error::InvalidParameter(format!("quincunx size {l} must be odd and positive")));
    }
    let mut b = Builder::new(true);
    let q = add_quincunx(&mut b, l);
    b.name("entrance", q.entrance);
    b.name("left_exit", q.left);
    b.name("right_exit", q.right);
    let g = b.finish(None, None)?;
    let port = |name| g.port(name).expect("named above");
    let mut terminal = vec![None; g.graph.n()];
    terminal[port("left_exit")] = Some(1.0);
    terminal[port("right_exit")] = Some(0.0);
    let (mdp, free) = terminal_problem(&g.graph, &terminal, 0.0, Sense::Maximize);
    let sol = mdp.solve(eps, vec![0; free.len()])?;
    let at = free.iter().position(|&v| v == port("entrance")).expect("entrance is free");
    Ok(sol.values[at])
}

/// Expected traversal time of `P(l)` at bias 1/4 from the recursion
/// `H_i = 1 + (3/8)H_0 + (5/8)H_{i+1}` for `1 ≤ i ≤ l`, `H_0 = 1 + H_1`,
/// `H_{l+1} = 0`; the traversal takes `1 + H_0`.
pub fn slow_path_expected(l: usize) -> Result<BigRational> {
    if l == 0 {
        return Err(Error::InvalidParameter("slow path length must be positive".into()));
    }
    // Back-substitute H_i = a + c H_0, starting from H_{l+1} = 0.
    let (stay, climb) = (ratio(3, 8), ratio(5, 8));
    let mut a = BigRational::zero();
    let mut c = BigRational::zero();
    for _ in 0..l {
        a = BigRational::one() + &climb * a;
        c = &stay + &climb * c;
    }
    // H_0 = 1 + a + c H_0.
    let h0 = (BigRational::one() + a) / (BigRational::one() - c);
    Ok(BigRational::one() + h0)
}

/// `(11/3)(8/5)^l - shift`.
fn slow_path_formula(l: usize, shift: BigRational) -> BigRational {
    ratio(11, 3) * num_traits::pow(ratio(8, 5), l) - shift
}

/// Closed form matching the recursion: `(11/3)(8/5)^l - 5/3`.
pub fn slow_path_closed_form(l: usize) -> BigRational {
    slow_path_formula(l, ratio(5, 3))
}

/// Traversal time of a slow path checked against both candidate closed
/// forms. The constant `-2/3` is off by one from what the recursion yields.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowPathReport {
    pub l: usize,
    pub traversal: BigRational,
    /// `(11/3)(8/5)^l - 5/3`.
    pub closed_form: BigRational,
    /// `(11/3)(8/5)^l - 2/3`.
    pub shifted_form: BigRational,
    pub matches_closed_form: bool,
    pub matches_shifted_form: bool,
}

pub fn slow_path_report(l: usize) -> Result<SlowPathReport> {
    let traversal = slow_path_expected(l)?;
    let closed_form = slow_path_closed_form(l);
    let shifted_form = slow_path_formula(l, ratio(2, 3));
    Ok(SlowPathReport {
        l,
        matches_closed_form: traversal == closed_form,
        matches_shifted_form: traversal == shifted_form,
        traversal,
        closed_form,
        shifted_form,
    })
}

/// Worst cases for a walk entering a star connector at a port, where each
/// port has one extra out-edge to an absorbing vertex outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctopusStats {
    /// Largest expected number of steps until leaving, including the step out.
    pub residence: f64,
    /// Largest probability of reaching the nexus before leaving.
    pub nexus_prob: f64,
    /// `(13/14)^l`.
    pub nexus_bound: f64,
    /// `residence < 14` and `nexus_prob < (13/14)^l`.
    pub holds: bool,
}

pub fn octopus_stats(l: usize, k: usize) -> Result<OctopusStats> {
    if l == 0 || k < 2 {
        return Err(Error::InvalidParameter(format!("star connector S({l},{k}) needs l ≥ 1 and k ≥ 2")));
    }
    let mut b = Builder::new(true);
    let (nexus, ports) = add_star(&mut b, l, k);
    b.name("nexus", nexus);
    for p in ports {
        let e = b.vertex();
        b.edge(p, e);
        b.push("ports", p);
        b.push("exits", e);
    }
    let g = b.finish(None, None)?;
    let (nexus, ports) = (g.port("nexus").expect("named above"), &g.ports["ports"]);
    let mut terminal = vec![None; g.graph.n()];
    for &e in &g.ports["exits"] {
        terminal[e] = Some(0.0);
    }
    let best_over_ports = |mdp: &FirstPassage, free: &[usize]| -> Result<f64> {
        let sol = mdp.solve(GADGET_EPS, vec![0; free.len()])?;
        Ok(ports
            .iter()
            .map(|&p| sol.values[free.iter().position(|&v| v == p).expect("ports are free")])
            .fold(0.0f64, f64::max))
    };
    let (mdp, free) = terminal_problem(&g.graph, &terminal, 1.0, Sense::Maximize);
    let residence = best_over_ports(&mdp, &free)?;
    terminal[nexus] = Some(1.0);
    let (mdp, free) = terminal_problem(&g.graph, &terminal, 0.0, Sense::Maximize);
    let nexus_prob = best_over_ports(&mdp, &free)?;
    let nexus_bound = powi(13.0 / 14.0, l as i32);
    Ok(OctopusStats { residence, nexus_prob, nexus_bound, holds: residence < 14.0 && nexus_prob < nexus_bound })
}

/// Decision thresholds for the cover time of `G(φ)` with slow paths `P(lp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsatTimes {
    /// Traversal time `L` of one slow path.
    pub slow_path: f64,
    /// `(5r - 1 + (3/8)^n / 100) L`.
    pub t_sat: f64,
    /// `(5r - 1 + 99 (3/8)^n / 100) L`.
    pub t_unsat: f64,
    pub threshold: f64,
}

pub fn tsat_tunsat(phi: &QsatInstance, lp: usize) -> Result<QsatTimes> {
    let l = slow_path_expected(lp)?.to_f64().expect("finite traversal time");
    let base = 5.0 * phi.clause_count() as f64 - 1.0;
    let tail = powi(3.0 / 8.0, phi.n() as i32);
    let t_sat = (base + 0.01 * tail) * l;
    let t_unsat = (base + 0.99 * tail) * l;
    Ok(QsatTimes { slow_path: l, t_sat, t_unsat, threshold: (t_sat + t_unsat) / 2.0 })
}

/// Crossing times between vertices of `H` inside its Hamilton reduction,
/// against the window `[2cn²/ε - n√c/ε^{3/2}, 2cn²/ε + 7/ε²]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingCheck {
    pub eps: f64,
    pub lower: f64,
    pub upper: f64,
    /// Smallest optimal time from a vertex of `H` to any other vertex of `H`.
    pub min_escape: f64,
    /// Largest optimal time between the ends of an edge of `H`.
    pub max_crossing: f64,
    pub holds: bool,
}

pub fn hamilton_crossing_check(h: &Graph, c: usize, eps: f64) -> Result<CrossingCheck> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("bias {eps} outside (0,1]")));
    }
    let g = hamilton_reduction(h, c)?;
    let n = h.n();
    let hv: Vec<usize> = (0..n).map(|i| g.port(&format!("h{i}")).expect("reduction names H")).collect();
    let size = g.graph.n();
    let len = 2.0 * (c * n * n) as f64;
    let lower = len / eps - n as f64 * libm::sqrt(c as f64) / libm::pow(eps, 1.5);
    let upper = len / eps + 7.0 / (eps * eps);
    let mut min_escape = f64::INFINITY;
    let mut max_crossing = 0.0f64;
    for x in 0..n {
        if h.degree(x) == 0 {
            continue;
        }
        let others = VertexSet::from_iter(size, (0..n).filter(|&y| y != x).map(|y| hv[y]));
        min_escape = min_escape.min(optimal_hitting_policy(&g.graph, &others, eps)?.values[hv[x]]);
    }
    for (x, y) in h.edges() {
        for (s, t) in [(x, y), (y, x)] {
            let pol = optimal_hitting_policy(&g.graph, &VertexSet::singleton(size, hv[t]), eps)?;
            max_crossing = max_crossing.max(pol.values[hv[s]]);
        }
    }
    let holds = lower <= min_escape && max_crossing <= upper;
    Ok(CrossingCheck { eps, lower, upper, min_escape, max_crossing, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::slow_path;
    use crate::graph::{generate, GraphFamily};

    #[test]
    fn quincunx_three() {
        let p = quincunx_success(3, &ratio(1, 4)).unwrap();
        assert_eq!(p, ratio(175, 256));
        assert_eq!(quincunx_success(5, &BigRational::one()).unwrap(), BigRational::one());
        assert_eq!(quincunx_success(1, &BigRational::zero()).unwrap(), ratio(1, 2));
        let opt = quincunx_optimum(3, 0.25).unwrap();
        assert!((opt - 175.0 / 256.0).abs() < 1e-12);
        assert!(quincunx_success(4, &0.25).is_err());
    }

    #[test]
    fn quincunx_fifteen() {
        let p: f64 = quincunx_success(15, &0.25).unwrap();
        assert!(p >= 1.0 - powi(0.99, 15));
        assert!((quincunx_optimum(15, 0.25).unwrap() - p).abs() < 1e-12);
    }

    #[test]
    fn slow_path_values() {
        assert_eq!(slow_path_expected(1).unwrap(), ratio(21, 5));
        assert_eq!(slow_path_expected(2).unwrap(), ratio(772, 100));
        assert_eq!(slow_path_expected(3).unwrap(), ratio(13352, 1000));
        let rep = slow_path_report(1).unwrap();
        assert!(rep.matches_closed_form && !rep.matches_shifted_form);
        assert_eq!(rep.shifted_form, ratio(26, 5));
        // Independent route: the general hitting solver on P(l).
        for l in [1, 4, 9] {
            let p = slow_path(l).unwrap();
            let target = VertexSet::singleton(p.graph.n(), p.port("finish").unwrap());
            let h = optimal_hitting_policy(&p.graph, &target, 0.25).unwrap();
            let exact = slow_path_expected(l).unwrap().to_f64().unwrap();
            assert!((h.values[p.port("start").unwrap()] - exact).abs() < 1e-9 * exact);
        }
    }

    #[test]
    fn octopus_small() {
        let s = octopus_stats(1, 2).unwrap();
        assert!((s.nexus_prob - 5.0 / 8.0).abs() < 1e-12);
        assert!((s.residence - 13.0 / 3.0).abs() < 1e-12);
        assert!(s.holds);
        assert!(octopus_stats(2, 2).unwrap().residence < 14.0);
        let s33 = octopus_stats(3, 3).unwrap();
        assert!(s33.nexus_prob < powi(13.0 / 14.0, 3));
    }

    #[test]
    fn qsat_thresholds() {
        let phi = QsatInstance::new(4, vec![[-1, 2, -3], [1, -2, 4], [1, 3, -4]]).unwrap();
        let t = tsat_tunsat(&phi, 3).unwrap();
        assert!((t.t_sat - (14.0 + 0.01 * 9.0 / 64.0) * 13.352).abs() < 1e-9);
        assert!((t.t_unsat - t.t_sat - 0.98 * 9.0 / 64.0 * 13.352).abs() < 1e-9);
        assert!(t.t_sat < t.threshold && t.threshold < t.t_unsat);
    }

    #[test]
    fn triangle_crossing_window() {
        let h = generate(&GraphFamily::Cycle(3)).unwrap();
        let r = hamilton_crossing_check(&h, 1, 0.25).unwrap();
        assert!((r.lower - 48.0).abs() < 1e-12 && (r.upper - 184.0).abs() < 1e-12);
        assert!(r.holds, "{r:?}");
    }
}
