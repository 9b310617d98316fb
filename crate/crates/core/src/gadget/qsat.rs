//! Quantified 3-CNF instances and their cover-time encoding.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::builder::Builder;
use super::construct::{add_quincunx, add_roundabout, add_slow_path, add_star};
use super::GadgetGraph;
use crate::{Error, Result};

/// `∃x₁ ∀x₂ ∃x₃ … ∀x_{2n} φ` with `φ` a 3-CNF. Literals are signed
/// variable indices in `1..=2n`, negative for negations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QsatInstance {
    vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl QsatInstance {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if vars == 0 || vars % 2 == 1 {
            return Err(Error::Formula(format!("variable count {vars} must be even and positive")));
        }
        if clauses.is_empty() {
            return Err(Error::Formula("formula has no clauses".into()));
        }
        for (c, clause) in clauses.iter().enumerate() {
            for (i, &lit) in clause.iter().enumerate() {
                if lit == 0 || lit.unsigned_abs() as usize > vars {
                    return Err(Error::Formula(format!("clause {c}: literal {lit} out of range")));
                }
                for &other in &clause[..i] {
                    if other == lit {
                        return Err(Error::Formula(format!("clause {c}: literal {lit} repeated")));
                    }
                    if other == -lit {
                        return Err(Error::Formula(format!("clause {c}: complementary literals {lit}")));
                    }
                }
            }
        }
        Ok(QsatInstance { vars, clauses })
    }

    /// The number of variables, `2n`.
    pub fn variable_count(&self) -> usize {
        self.vars
    }

    /// Number of quantifier alternations `n`.
    pub fn n(&self) -> usize {
        self.vars / 2
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Odd-indexed variables are existential.
    pub fn is_existential(&self, var: usize) -> bool {
        var % 2 == 1
    }

    /// `N(φ, x)`: the number of clauses containing `lit`.
    pub fn occurrences(&self, lit: i32) -> usize {
        self.clauses.iter().filter(|c| c.contains(&lit)).count()
    }
}

/// Port-name form of a literal: `x3` or `!x3`.
pub fn literal_name(lit: i32) -> String {
    if lit > 0 {
        format!("x{lit}")
    } else {
        format!("!x{}", -lit)
    }
}

/// The graph `G(φ)` with its unvisited set.
///
/// One roundabout `R(lp, lq, 3)` per clause, its arrivals labelled by the
/// clause's literals; a star connector `S(ls, 6r)` whose ports are the
/// roundabouts' slow-path starts and quincunx entrances; a cascade of
/// quincunxes per literal with slow-path detours through each roundabout
/// containing it; forks (universal) or quincunxes (existential) between the
/// cascades of each variable; and a closing slow path back to the start.
pub fn qsat_graph(phi: &QsatInstance, lp: usize, lq: usize, ls: usize) -> Result<GadgetGraph> {
    if lp == 0 || ls == 0 {
        return Err(Error::InvalidParameter("slow path and star lengths must be positive".into()));
    }
    if lq % 2 == 0 {
        return Err(Error::InvalidParameter(format!("quincunx size {lq} must be odd")));
    }
    let r = phi.clause_count();
    let mut b = Builder::new(true);
    let mut unvisited = Vec::new();
    let mut star_targets = Vec::new();
    let mut rounds = Vec::with_capacity(r);
    for _ in 0..r {
        let ra = add_roundabout(&mut b, lp, lq, 3);
        star_targets.extend_from_slice(&ra.starts);
        star_targets.extend_from_slice(&ra.entrances);
        unvisited.extend_from_slice(&ra.interiors);
        for (&a, &d) in ra.arrivals.iter().zip(&ra.departures) {
            b.push("arrivals", a);
            b.push("departures", d);
        }
        for &e in &ra.entrances {
            b.push("quincunx_entrances", e);
        }
        rounds.push(ra);
    }
    let (nexus, ports) = add_star(&mut b, ls, 6 * r);
    for (&p, &t) in ports.iter().zip(&star_targets) {
        b.merge(p, t);
        b.push("star_ports", p);
    }
    b.name("nexus", nexus);

    // Cascade for each literal; returns (in, out).
    let cascade = |b: &mut Builder, lit: i32| -> (usize, usize) {
        let out = b.vertex();
        let mut first = None;
        let mut prev_exit: Option<usize> = None;
        for (c, clause) in phi.clauses().iter().enumerate() {
            let Some(slot) = clause.iter().position(|&l| l == lit) else {
                continue;
            };
            let q = add_quincunx(b, lq);
            b.push("quincunx_entrances", q.entrance);
            let to = add_slow_path(b, lp);
            let back = add_slow_path(b, lp);
            b.merge(q.right, to.start);
            b.merge(to.finish, rounds[c].arrivals[slot]);
            b.merge(rounds[c].departures[slot], back.start);
            b.merge(back.finish, q.left);
            match prev_exit {
                Some(e) => b.edge(e, q.entrance),
                None => first = Some(q.entrance),
            }
            prev_exit = Some(q.left);
        }
        match prev_exit {
            Some(e) => {
                b.edge(e, out);
                (first.expect("nonempty cascade has an entrance"), out)
            }
            None => {
                let inp = b.vertex();
                b.edge(inp, out);
                (inp, out)
            }
        }
    };

    let mut firsts = Vec::with_capacity(phi.variable_count());
    let mut lasts = Vec::with_capacity(phi.variable_count());
    for var in 1..=phi.variable_count() {
        let lit = var as i32;
        let (in_pos, out_pos) = cascade(&mut b, lit);
        let (in_neg, out_neg) = cascade(&mut b, -lit);
        b.name(format!("in_{}", literal_name(lit)), in_pos);
        b.name(format!("in_{}", literal_name(-lit)), in_neg);
        b.name(format!("out_{}", literal_name(lit)), out_pos);
        b.name(format!("out_{}", literal_name(-lit)), out_neg);
        b.merge(out_pos, out_neg);
        let first = if phi.is_existential(var) {
            let q = add_quincunx(&mut b, lq);
            b.push("quincunx_entrances", q.entrance);
            b.merge(q.left, in_pos);
            b.merge(q.right, in_neg);
            q.entrance
        } else {
            let f = b.vertex();
            b.edge(f, in_pos);
            b.edge(f, in_neg);
            f
        };
        b.name(format!("first_{var}"), first);
        b.name(format!("last_{var}"), out_pos);
        firsts.push(first);
        lasts.push(out_pos);
    }
    for i in 1..lasts.len() {
        b.merge(lasts[i - 1], firsts[i]);
    }
    let back = add_slow_path(&mut b, lp);
    b.merge(back.start, lasts[lasts.len() - 1]);
    b.merge(back.finish, firsts[0]);
    b.name("start", firsts[0]);
    b.finish(Some(unvisited), Some(firsts[0]))
}
