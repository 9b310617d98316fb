//! First-passage problems for an ε-biased controller, solved by policy
//! iteration.
//!
//! Each interior state has an ordered list of successors. A step costs
//! `step_cost`; with probability `1-ε` the successor is uniform, otherwise it
//! is the one the policy names. Successors are either interior states or
//! terminal outcomes with a fixed value.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::{Error, Result};

const ITERATION_LIMIT: usize = 10_000;
/// Relative margin a switch must gain before policy improvement takes it.
const IMPROVE_TOL: f64 = 1e-12;
const BELLMAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Succ {
    State(usize),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub(crate) struct FirstPassage {
    pub succ: Vec<Vec<Succ>>,
    pub step_cost: f64,
    pub sense: Sense,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub values: Vec<f64>,
    /// Index into `succ[x]` of the chosen successor.
    pub policy: Vec<usize>,
}

impl FirstPassage {
    fn value_of(values: &[f64], s: Succ) -> f64 {
        match s {
            Succ::State(j) => values[j],
            Succ::Fixed(v) => v,
        }
    }

    /// Values of a fixed policy from the linear system
    /// `h = c + (1-ε) mean(h(succ)) + ε h(chosen)`.
    pub fn evaluate(&self, eps: f64, policy: &[usize]) -> Result<Vec<f64>> {
        let m = self.succ.len();
        let mut a = vec![0.0; m * m];
        let mut b = vec![self.step_cost; m];
        for x in 0..m {
            a[x * m + x] += 1.0;
            let list = &self.succ[x];
            let share = (1.0 - eps) / list.len() as f64;
            let mut add = |s: Succ, w: f64| match s {
                Succ::State(j) => a[x * m + j] -= w,
                Succ::Fixed(v) => b[x] += w * v,
            };
            for &s in list {
                add(s, share);
            }
            if eps > 0.0 {
                add(list[policy[x]], eps);
            }
        }
        linalg::solve(m, &a, &b)
    }

    fn better(&self, a: f64, b: f64) -> bool {
        let margin = IMPROVE_TOL * 1.0f64.max(a.abs()).max(b.abs());
        match self.sense {
            Sense::Minimize => a < b - margin,
            Sense::Maximize => a > b + margin,
        }
    }

    /// Best successor index at `x` given `values`: strict improvements only,
    /// so ties and float noise resolve to the earliest successor.
    pub fn greedy(&self, values: &[f64], x: usize) -> usize {
        let list = &self.succ[x];
        let mut best = 0;
        for k in 1..list.len() {
            if self.better(Self::value_of(values, list[k]), Self::value_of(values, list[best])) {
                best = k;
            }
        }
        best
    }

    /// Policy iteration from a proper initial policy.
    pub fn solve(&self, eps: f64, initial: Vec<usize>) -> Result<Solution> {
        if self.succ.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter("first-passage state without successors".into()));
        }
        let mut policy = initial;
        let mut values = self.evaluate(eps, &policy)?;
        if eps == 0.0 {
            return Ok(Solution { values, policy });
        }
        for _ in 0..ITERATION_LIMIT {
            let mut changed = false;
            for x in 0..self.succ.len() {
                let list = &self.succ[x];
                let current = Self::value_of(&values, list[policy[x]]);
                let g = self.greedy(&values, x);
                if self.better(Self::value_of(&values, list[g]), current) {
                    policy[x] = g;
                    changed = true;
                }
            }
            if !changed {
                for x in 0..self.succ.len() {
                    policy[x] = self.greedy(&values, x);
                }
                self.check_bellman(eps, &values)?;
                return Ok(Solution { values, policy });
            }
            values = self.evaluate(eps, &policy)?;
        }
        Err(Error::NoConvergence("policy iteration"))
    }

    fn check_bellman(&self, eps: f64, values: &[f64]) -> Result<()> {
        for (x, list) in self.succ.iter().enumerate() {
            let mean = list.iter().map(|&s| Self::value_of(values, s)).sum::<f64>() / list.len() as f64;
            let pick = Self::value_of(values, list[self.greedy(values, x)]);
            let rhs = self.step_cost + (1.0 - eps) * mean + eps * pick;
            if (rhs - values[x]).abs() > BELLMAN_TOL * 1.0f64.max(values[x].abs()) {
                return Err(Error::NoConvergence("Bellman residual above tolerance"));
            }
        }
        Ok(())
    }

    /// A proper starting policy for minimisation: at each state pick the
    /// successor with the smallest value under the uncontrolled walk. When
    /// the uncontrolled walk reaches a terminal from everywhere this
    /// strictly decreases its expected remaining cost along the chain.
    pub fn srw_greedy(&self) -> Result<Vec<usize>> {
        let zero = vec![0; self.succ.len()];
        let values = self.evaluate(0.0, &zero)?;
        Ok((0..self.succ.len()).map(|x| self.greedy(&values, x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path 0 - 1 - 2 with target 2.
    fn path3() -> FirstPassage {
        FirstPassage {
            succ: vec![vec![Succ::State(1)], vec![Succ::State(0), Succ::Fixed(0.0)]],
            step_cost: 1.0,
            sense: Sense::Minimize,
        }
    }

    #[test]
    fn path_hitting_values() {
        let mdp = path3();
        let srw = mdp.evaluate(0.0, &[0, 0]).unwrap();
        assert!((srw[0] - 4.0).abs() < 1e-12 && (srw[1] - 3.0).abs() < 1e-12);
        let sol = mdp.solve(0.5, mdp.srw_greedy().unwrap()).unwrap();
        assert!((sol.values[0] - 8.0 / 3.0).abs() < 1e-12);
        assert!((sol.values[1] - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(sol.policy, [0, 1]);
    }

    #[test]
    fn maximisation_prefers_the_long_way() {
        let mut mdp = path3();
        mdp.sense = Sense::Maximize;
        let sol = mdp.solve(0.5, vec![0, 1]).unwrap();
        // Biasing away from the target: h1 = 1 + h0 * 3/4, h0 = 1 + h1.
        assert!((sol.values[1] - 7.0).abs() < 1e-10);
        assert_eq!(sol.policy, [0, 0]);
    }
}
