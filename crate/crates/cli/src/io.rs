//! File formats: graph JSON, DOT, DIMACS-style CNF and profile CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use biaswalk_core::chain::SpectralProfile;
use biaswalk_core::gadget::{GadgetGraph, QsatInstance};
use biaswalk_core::Graph;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// On-disk graph. Undirected edges are listed once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub directed: bool,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, usize>>,
}

#[derive(Debug)]
pub enum IoError {
    Parse(String),
    Graph(biaswalk_core::Error),
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Parse(m) => write!(f, "parse error: {m}"),
            IoError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<biaswalk_core::Error> for IoError {
    fn from(e: biaswalk_core::Error) -> Self {
        IoError::Graph(e)
    }
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        let labels = (!g.labels().is_empty()).then(|| g.labels().clone());
        GraphJson {
            directed: g.is_directed(),
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            weights: g.edge_weights(),
            labels,
        }
    }

    pub fn to_graph(&self) -> Result<Graph, IoError> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = match &self.weights {
            Some(w) => Graph::with_weights(self.n, self.directed, &edges, w)?,
            None => Graph::new(self.n, self.directed, &edges)?,
        };
        for (name, &v) in self.labels.iter().flatten() {
            g.set_label(name.clone(), v)?;
        }
        Ok(g)
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let json: GraphJson = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    json.to_graph()
}

pub fn graph_to_json(g: &Graph) -> Value {
    serde_json::to_value(GraphJson::from_graph(g)).expect("graph serialises")
}

/// Graph JSON plus the port table and unvisited set of a gadget.
pub fn gadget_to_json(g: &GadgetGraph) -> Value {
    let mut v = graph_to_json(&g.graph);
    let obj = v.as_object_mut().expect("object");
    obj.insert("ports".into(), serde_json::to_value(&g.ports).expect("ports serialise"));
    if let Some(u) = &g.unvisited {
        obj.insert("unvisited".into(), u.iter().collect::<Vec<_>>().into());
    }
    if let Some(s) = g.start {
        obj.insert("start".into(), s.into());
    }
    v
}

pub fn to_dot(g: &Graph) -> String {
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut names: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (name, &v) in g.labels() {
        names.entry(v).or_default().push(name);
    }
    let mut out = format!("{kind} G {{\n");
    for v in 0..g.n() {
        match names.get(&v) {
            Some(ls) => writeln!(out, "  {v} [label=\"{v}: {}\"];", ls.join(", ")).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    let weights = g.edge_weights();
    for (i, (u, v)) in g.edges().into_iter().enumerate() {
        match &weights {
            Some(w) => writeln!(out, "  {u} {arrow} {v} [weight={}];", w[i]).unwrap(),
            None => writeln!(out, "  {u} {arrow} {v};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

/// DIMACS-style CNF: `c` comment lines, a `p cnf <vars> <clauses>` header and
/// clauses of signed literals each terminated by `0`.
pub fn parse_cnf(text: &str) -> Result<QsatInstance, IoError> {
    let mut header = None;
    let mut lits = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(IoError::Parse(format!("bad header line: {line}")));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| IoError::Parse(format!("bad header number {s}")));
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        if header.is_none() {
            return Err(IoError::Parse("clause before the p cnf header".into()));
        }
        for tok in line.split_whitespace() {
            lits.push(tok.parse::<i32>().map_err(|_| IoError::Parse(format!("bad literal {tok}")))?);
        }
    }
    let (vars, count) = header.ok_or_else(|| IoError::Parse("missing p cnf header".into()))?;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for lit in lits {
        if lit == 0 {
            let clause: [i32; 3] = current
                .as_slice()
                .try_into()
                .map_err(|_| IoError::Parse(format!("clause {} has {} literals, not 3", clauses.len() + 1, current.len())))?;
            clauses.push(clause);
            current.clear();
        } else {
            current.push(lit);
        }
    }
    if !current.is_empty() {
        return Err(IoError::Parse("last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(IoError::Parse(format!("header promises {count} clauses, found {}", clauses.len())));
    }
    Ok(QsatInstance::new(vars, clauses)?)
}

/// Header of [`profile_csv_line`].
pub const PROFILE_CSV_HEADER: &str = "graph_id,n,m,lambda_star,t_rel,t_mix,t_sep,t_inf";

pub fn profile_csv_line(id: &str, g: &Graph, p: &SpectralProfile) -> String {
    format!(
        "{id},{},{},{},{},{},{},{}",
        g.n(),
        g.edge_count(),
        fmt_sig(p.lambda_star),
        fmt_sig(p.t_rel),
        p.t_mix,
        p.t_sep,
        p.t_inf
    )
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        round_sig(x).to_string()
    }
}

/// JSON number with 12 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(round_sig(x))
    } else {
        Value::from(fmt_sig(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use biaswalk_core::graph::{generate, GraphFamily};

    #[test]
    fn graph_json_roundtrip() {
        let mut g = generate(&GraphFamily::Petersen).unwrap();
        g.set_label("hub", 3).unwrap();
        let text = graph_to_json(&g).to_string();
        assert_eq!(parse_graph(&text).unwrap(), g);
        let w = Graph::with_weights(3, true, &[(0, 1), (1, 2), (2, 0)], &[1.0, 2.5, 3.0]).unwrap();
        assert_eq!(parse_graph(&graph_to_json(&w).to_string()).unwrap(), w);
        assert!(parse_graph(r#"{"directed":false,"n":2,"edges":[[0,1]],"colour":1}"#).is_err());
        assert!(parse_graph(r#"{"directed":false,"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn cnf_parsing() {
        let text = "c example\np cnf 4 3\n-1 2 -3 0\n1 -2 4 0\n1 3\n -4 0\n";
        let phi = parse_cnf(text).unwrap();
        assert_eq!(phi.clauses(), [[-1, 2, -3], [1, -2, 4], [1, 3, -4]]);
        assert!(parse_cnf("p cnf 4 1\n1 2 0\n").is_err());
        assert!(parse_cnf("p cnf 4 2\n1 2 3 0\n").is_err());
        assert!(parse_cnf("p cnf 3 1\n1 2 3 0\n").is_err());
        assert!(parse_cnf("1 2 3 0\n").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(2.6000000000000005), 2.6);
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(num(1e-20).as_f64(), Some(1e-20));
    }

    #[test]
    fn dot_output() {
        let g = Graph::new(2, true, &[(0, 1)]).unwrap();
        assert_eq!(to_dot(&g), "digraph G {\n  0;\n  1;\n  0 -> 1;\n}\n");
    }
}
