//! The directed gadgets and the undirected Hamilton-path reduction.

use alloc::format;
use alloc::vec::Vec;

use super::builder::Builder;
use super::GadgetGraph;
use crate::graph::Graph;
use crate::{Error, Result};

pub(crate) struct QuincunxPorts {
    pub entrance: usize,
    pub left: usize,
    pub right: usize,
}

pub(crate) struct SlowPathPorts {
    pub start: usize,
    pub finish: usize,
    /// Hill vertices `v_0..=v_l`.
    pub hill: Vec<usize>,
}

pub(crate) struct RoundaboutPorts {
    pub starts: Vec<usize>,
    pub entrances: Vec<usize>,
    /// Left exit of quincunx `i`.
    pub departures: Vec<usize>,
    /// Right exit of quincunx `i`, which is also the start of slow path `i+1`.
    pub arrivals: Vec<usize>,
    /// Slow-path vertices other than the starts.
    pub interiors: Vec<usize>,
}

fn check_odd(l: usize) -> Result<()> {
    if l == 0 || l % 2 == 0 {
        return Err(Error::InvalidParameter(format!("quincunx size {l} must be odd and positive")));
    }
    Ok(())
}

fn check_positive(what: &str, l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidParameter(format!("{what} length must be positive")));
    }
    Ok(())
}

pub(crate) fn add_quincunx(b: &mut Builder, l: usize) -> QuincunxPorts {
    // Row j holds v_{0,j}..v_{j,j}.
    let rows: Vec<Vec<usize>> = (0..=l).map(|j| b.vertices(j + 1)).collect();
    let (left, right) = (b.vertex(), b.vertex());
    for j in 0..l {
        for i in 0..=j {
            b.edge(rows[j][i], rows[j + 1][i]);
            b.edge(rows[j][i], rows[j + 1][i + 1]);
        }
    }
    for i in 0..=l {
        b.edge(rows[l][i], if 2 * i < l { left } else { right });
    }
    QuincunxPorts { entrance: rows[0][0], left, right }
}

pub(crate) fn add_hill(b: &mut Builder, l: usize) -> Vec<usize> {
    let v = b.vertices(l + 1);
    for i in 1..=l {
        b.edge(v[i - 1], v[i]);
        b.edge(v[i], v[0]);
    }
    v
}

pub(crate) fn add_slow_path(b: &mut Builder, l: usize) -> SlowPathPorts {
    let hill = add_hill(b, l);
    let (start, finish) = (b.vertex(), b.vertex());
    b.edge(start, hill[0]);
    b.edge(hill[l], finish);
    SlowPathPorts { start, finish, hill }
}

/// Returns the nexus and the ports.
pub(crate) fn add_star(b: &mut Builder, l: usize, k: usize) -> (usize, Vec<usize>) {
    let mut nexus = None;
    let mut ports = Vec::with_capacity(k);
    for _ in 0..k {
        let hill = add_hill(b, l);
        match nexus {
            Some(top) => b.merge(top, hill[l]),
            None => nexus = Some(hill[l]),
        }
        ports.push(hill[0]);
    }
    (nexus.expect("star has at least one arm"), ports)
}

pub(crate) fn add_roundabout(b: &mut Builder, lp: usize, lq: usize, k: usize) -> RoundaboutPorts {
    let paths: Vec<SlowPathPorts> = (0..k).map(|_| add_slow_path(b, lp)).collect();
    let quins: Vec<QuincunxPorts> = (0..k).map(|_| add_quincunx(b, lq)).collect();
    let mut interiors = Vec::new();
    for i in 0..k {
        b.merge(paths[i].finish, quins[i].entrance);
        b.merge(quins[i].right, paths[(i + 1) % k].start);
        interiors.extend_from_slice(&paths[i].hill);
        interiors.push(paths[i].finish);
    }
    RoundaboutPorts {
        starts: paths.iter().map(|p| p.start).collect(),
        entrances: quins.iter().map(|q| q.entrance).collect(),
        departures: quins.iter().map(|q| q.left).collect(),
        arrivals: quins.iter().map(|q| q.right).collect(),
        interiors,
    }
}

/// Quincunx `Q(l)` for odd `l`: vertices `v_{i,j}` with `0 ≤ i ≤ j ≤ l`,
/// where `v_{i,j}` steps to `v_{i,j+1}` (left) or `v_{i+1,j+1}` (right) and
/// the last row exits left if `2i < l` and right otherwise. Crossing it takes
/// exactly `l + 1` steps.
pub fn quincunx(l: usize) -> Result<GadgetGraph> {
    check_odd(l)?;
    let mut b = Builder::new(true);
    let q = add_quincunx(&mut b, l);
    b.name("entrance", q.entrance);
    b.name("left_exit", q.left);
    b.name("right_exit", q.right);
    b.finish(None, Some(q.entrance))
}

/// Steep hill `H(l)`: `v_{i-1} → v_i` and `v_i → v_0` for `1 ≤ i ≤ l`.
pub fn steep_hill(l: usize) -> Result<GadgetGraph> {
    check_positive("hill", l)?;
    let mut b = Builder::new(true);
    let v = add_hill(&mut b, l);
    b.name("bottom", v[0]);
    b.name("top", v[l]);
    b.finish(None, Some(v[0]))
}

/// Slow path `P(l)`: a steep hill entered at the bottom from `start` and
/// left from the top to `finish`.
pub fn slow_path(l: usize) -> Result<GadgetGraph> {
    check_positive("slow path", l)?;
    let mut b = Builder::new(true);
    let p = add_slow_path(&mut b, l);
    b.name("start", p.start);
    b.name("finish", p.finish);
    b.name("bottom", p.hill[0]);
    b.name("top", p.hill[l]);
    b.finish(None, Some(p.start))
}

/// Star connector `S(l, k)`: `k` steep hills sharing their top (the nexus);
/// the bottoms are the ports.
pub fn star_connector(l: usize, k: usize) -> Result<GadgetGraph> {
    check_positive("hill", l)?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("star connector needs at least two arms, got {k}")));
    }
    let mut b = Builder::new(true);
    let (nexus, ports) = add_star(&mut b, l, k);
    b.name("nexus", nexus);
    for p in ports {
        b.push("ports", p);
    }
    b.finish(None, None)
}

/// Roundabout `R(lp, lq, k)`: `k` slow paths and `k` quincunxes in a cycle.
/// Departures (left exits) are left without out-edges.
pub fn roundabout(lp: usize, lq: usize, k: usize) -> Result<GadgetGraph> {
    check_positive("slow path", lp)?;
    check_odd(lq)?;
    check_positive("roundabout", k)?;
    let mut b = Builder::new(true);
    let r = add_roundabout(&mut b, lp, lq, k);
    for (name, list) in [
        ("starts", &r.starts),
        ("entrances", &r.entrances),
        ("departures", &r.departures),
        ("arrivals", &r.arrivals),
    ] {
        for &v in list {
            b.push(name, v);
        }
    }
    b.finish(Some(r.interiors), Some(r.starts[0]))
}

/// Undirected graph in which covering `V(H) ∖ {0}` from vertex 0 is fast
/// exactly when `H` has a Hamilton path from 0. Each edge of `H` becomes a
/// path of length `2cn²`, a pendant path of length `cn³` hangs from each
/// midpoint and the pendant ends are joined in a cycle.
pub fn hamilton_reduction(h: &Graph, c: usize) -> Result<GadgetGraph> {
    if h.is_directed() {
        return Err(Error::Directed);
    }
    if c == 0 {
        return Err(Error::InvalidParameter("scale c must be positive".into()));
    }
    let n = h.n();
    if n == 0 {
        return Err(Error::Empty);
    }
    let half = c * n * n;
    let pendant = c * n * n * n;
    let mut b = Builder::new(false);
    let hv = b.vertices(n);
    let mut ends = Vec::new();
    for (x, y) in h.edges() {
        let inner = b.vertices(2 * half - 1);
        let mut prev = hv[x];
        for &v in &inner {
            b.edge(prev, v);
            prev = v;
        }
        b.edge(prev, hv[y]);
        let mut prev = inner[half - 1];
        for v in b.vertices(pendant) {
            b.edge(prev, v);
            prev = v;
        }
        ends.push(prev);
        b.push("midpoints", inner[half - 1]);
    }
    match ends.len() {
        0 | 1 => {}
        2 => b.edge(ends[0], ends[1]),
        k => {
            for i in 0..k {
                b.edge(ends[i], ends[(i + 1) % k]);
            }
        }
    }
    for (i, &v) in hv.iter().enumerate() {
        b.name(format!("h{i}"), v);
    }
    for &e in &ends {
        b.push("pendant_ends", e);
    }
    b.finish(Some(hv[1..].to_vec()), Some(hv[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Connectivity, GraphFamily};

    #[test]
    fn quincunx_shape() {
        let q = quincunx(1).unwrap();
        let g = &q.graph;
        assert_eq!(g.n(), 5);
        let v00 = q.port("entrance").unwrap();
        let (x, y) = (q.port("left_exit").unwrap(), q.port("right_exit").unwrap());
        let nb = g.neighbours(v00).to_vec();
        assert_eq!(nb.len(), 2);
        assert_eq!(g.neighbours(nb[0]), [x]);
        assert_eq!(g.neighbours(nb[1]), [y]);
        let q3 = quincunx(3).unwrap();
        assert_eq!(q3.graph.n(), 12);
        let dist = q3.graph.bfs_distances(q3.port("entrance").unwrap());
        assert_eq!(dist[q3.port("left_exit").unwrap()], Some(4));
        assert_eq!(dist[q3.port("right_exit").unwrap()], Some(4));
        assert!(quincunx(2).is_err() && quincunx(0).is_err());
    }

    #[test]
    fn hill_and_slow_path() {
        let h = steep_hill(1).unwrap();
        assert_eq!(h.graph.edges(), [(0, 1), (1, 0)]);
        assert_eq!(h.graph.connectivity(), Connectivity::StronglyConnected);
        let p = slow_path(1).unwrap();
        let (s, f) = (p.port("start").unwrap(), p.port("finish").unwrap());
        let (v0, v1) = (p.port("bottom").unwrap(), p.port("top").unwrap());
        let mut want = alloc::vec![(s, v0), (v0, v1), (v1, v0), (v1, f)];
        want.sort();
        assert_eq!(p.graph.edges(), want);
        assert_eq!(slow_path(3).unwrap().graph.n(), 6);
    }

    #[test]
    fn roundabout_counts() {
        let r = roundabout(1, 1, 1).unwrap();
        for name in ["starts", "entrances", "departures", "arrivals"] {
            assert_eq!(r.ports[name].len(), 1);
        }
        assert_eq!(r.ports["arrivals"], r.ports["starts"]);
        let r = roundabout(3, 3, 3).unwrap();
        assert_eq!(r.graph.n(), 3 * (6 + 12 - 2));
        for &d in &r.ports["departures"] {
            assert_eq!(r.graph.degree(d), 0);
        }
        assert_eq!(r.unvisited.as_ref().unwrap().len(), 3 * 5);
    }

    #[test]
    fn star_shape() {
        let s = star_connector(3, 3).unwrap();
        assert_eq!(s.graph.n(), 3 * 3 + 1);
        let nexus = s.port("nexus").unwrap();
        assert_eq!(s.graph.neighbours(nexus).len(), 3);
        assert_eq!(s.graph.connectivity(), Connectivity::StronglyConnected);
    }

    #[test]
    fn hamilton_triangle() {
        let h = generate(&GraphFamily::Cycle(3)).unwrap();
        let g = hamilton_reduction(&h, 1).unwrap();
        assert_eq!(g.graph.n(), 3 + 3 * 17 + 3 * 27);
        assert!(g.graph.degree_stats().d_max <= 3);
        let (a, b) = (g.port("h0").unwrap(), g.port("h1").unwrap());
        assert_eq!(g.graph.bfs_distances(a)[b], Some(18));
        let ends = &g.ports["pendant_ends"];
        assert_eq!(ends.len(), 3);
        for &e in ends {
            assert_eq!(g.graph.degree(e), 3);
        }
        assert_eq!(g.unvisited.as_ref().unwrap().len(), 2);
        let edge = generate(&GraphFamily::Path(2)).unwrap();
        assert_eq!(hamilton_reduction(&edge, 1).unwrap().graph.n(), 2 + 7 + 8);
    }
}
