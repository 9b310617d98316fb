//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use biaswalk_core::bias::{trajectory_boost, Boost, TrajectoryPredicate};
use biaswalk_core::chain::{spectral_profile, srw_kernel, stationary};
use biaswalk_core::gadget::{
    hamilton_crossing_check, hamilton_reduction, octopus_stats, qsat_graph, quincunx, quincunx_optimum,
    quincunx_success, roundabout, slow_path, slow_path_report, star_connector, steep_hill, tsat_tunsat,
    GadgetGraph, GADGET_EPS,
};
use biaswalk_core::graph::{generate, library, GraphFamily};
use biaswalk_core::sim::{phase_cover_strategy, replicate, Estimate, Stop, Strategy};
use biaswalk_core::strategy::{
    best_step, cost_decision, cover_policy_from, max_stationary, next_step, optimal_cover_policy,
    optimal_hitting_policy, CoverPolicy,
};
use biaswalk_core::{Graph, VertexSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::RngCore;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::io::{self, fmt_sig, num};
use crate::verify;

/// Biased random walks on graphs: exact strategies, gadgets and simulation.
#[derive(Debug, Parser)]
#[command(name = "biaswalk", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Graph JSON file.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Bias, as a decimal or a fraction `a/b`.
    #[arg(long, global = true)]
    eps: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph: `{directed, n, edges, weights?, labels?}`.
    Gen(GenArgs),
    /// Degree, connectivity and spectral profile: `{graph_id, n, m, degree, connectivity, stationary, profile}`.
    Analyze {
        /// Analyse every graph of the built-in library instead of `--graph`.
        #[arg(long)]
        library: bool,
    },
    /// Optimal time-biased probability of a trajectory event: `{p, q, bound, ratio, potential}`.
    Boost {
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Comma-separated target vertices.
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<usize>,
        #[arg(long)]
        horizon: usize,
        /// Event "visits the target by the horizon" instead of "is in the target at the horizon".
        #[arg(long)]
        hit_by: bool,
        /// Exact rational arithmetic; `p` and `q` are printed as fractions too.
        #[arg(long)]
        exact: bool,
    },
    /// Optimal hitting policy: `{values, choice}`; with `--stationary`, `{vertex, pi, pi_q, bias}`.
    Hit {
        #[arg(long, value_delimiter = ',')]
        target: Vec<usize>,
        /// Maximise the stationary mass of `--vertex` instead.
        #[arg(long)]
        stationary: bool,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Optimal cover policy: `{value, start, eps, policy}`, tables keyed by hex visited-set masks.
    Cover {
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Omit the policy tables.
        #[arg(long)]
        summary: bool,
    },
    /// Whether stepping to `y` beats stepping to `z`: `{better, value_y, value_z}`.
    Beststep {
        #[arg(long, value_delimiter = ',', required = true)]
        visited: Vec<usize>,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        z: usize,
    },
    /// Whether the optimal remaining cover time is below a threshold: `{below, value, next_step}`.
    Cost {
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        visited: Vec<usize>,
        #[arg(long)]
        threshold: f64,
    },
    /// Build or certify a gadget: graph JSON with `ports`, `unvisited`, `start`, or a certificate.
    Gadget(GadgetArgs),
    /// Seeded simulation: CSV `replicate,stop_time` or `{mean, se, replicates, seed}`.
    Sim(SimArgs),
    /// Run a verification suite: `{suite, seed, checks, failures, coverage}`.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Star,
    Complete,
    Bipartite,
    Petersen,
    Ring,
    Gnp,
    Bintree,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Vertex count; leaves for stars, side size for bipartite graphs.
    #[arg(long)]
    n: Option<usize>,
    /// Second side of a bipartite graph.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    units: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GadgetFamily {
    Quincunx,
    Hill,
    Slowpath,
    Roundabout,
    Star,
    Qsat,
    Hamilton,
}

#[derive(Debug, Args)]
struct GadgetArgs {
    #[arg(long, value_enum)]
    family: GadgetFamily,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    lp: Option<usize>,
    #[arg(long)]
    lq: Option<usize>,
    #[arg(long)]
    ls: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Edge-path scale of the Hamilton reduction.
    #[arg(long)]
    c: Option<usize>,
    /// Formula for the QSAT graph, `p cnf <vars> <clauses>` format.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Print the gadget's certificate instead of the graph.
    #[arg(long)]
    certify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimStrategy {
    /// Unbiased steps.
    None,
    /// Optimal policy for the stopping rule (cover or hit).
    Optimal,
    /// Phase strategy for covering.
    Phase,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, value_enum, default_value_t = SimStrategy::None)]
    strategy: SimStrategy,
    /// Stop on hitting these vertices; covering when absent.
    #[arg(long, value_delimiter = ',')]
    target: Vec<usize>,
    /// Stop after this many steps.
    #[arg(long, conflicts_with = "target")]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    /// A verification report with failing checks; still written out.
    Checks { report: String, failures: usize },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
            CliError::Checks { failures, .. } => write!(f, "{failures} checks failed"),
        }
    }
}

impl From<biaswalk_core::Error> for CliError {
    fn from(e: biaswalk_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn domain(msg: impl Into<String>) -> CliError {
    CliError::Domain(msg.into())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = std::env::var("BIASWALK_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Fails only when a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let emit = |text: &str| match &cli.global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    let result = match compute(&cli) {
        Ok(text) => emit(&text),
        Err(CliError::Checks { report, failures }) => {
            emit(&report).and(Err(CliError::Checks { report: String::new(), failures }))
        }
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            2
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(e @ CliError::Checks { .. }) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Parses and runs a command, returning what it would print.
pub fn execute<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
    compute(&cli)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn compute(cli: &Cli) -> Result<String, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => cmd_gen(g, a),
        Command::Analyze { library } => cmd_analyze(g, *library),
        Command::Boost { start, target, horizon, hit_by, exact } => {
            cmd_boost(g, *start, target, *horizon, *hit_by, *exact)
        }
        Command::Hit { target, stationary, vertex } => cmd_hit(g, target, *stationary, *vertex),
        Command::Cover { start, summary } => cmd_cover(g, *start, *summary),
        Command::Beststep { visited, y, z } => {
            let graph = load_graph(g)?;
            let eps = eps_f64(g)?;
            let x = vertex_set(&graph, visited)?;
            let better = best_step(&graph, &x, *y, *z, eps)?;
            let policy = cover_policy_from(&graph, &x, eps)?;
            let base = mask(&x);
            let value = |w: usize| policy.value(w, base | 1 << w).map_or(Value::Null, num);
            only_json(g, json!({"better": better, "value_y": value(*y), "value_z": value(*z)}))
        }
        Command::Cost { vertex, visited, threshold } => {
            let graph = load_graph(g)?;
            let eps = eps_f64(g)?;
            let x = vertex_set(&graph, visited)?;
            let below = cost_decision(&graph, *vertex, &x, *threshold, eps)?;
            let policy = cover_policy_from(&graph, &x, eps)?;
            let value = policy.value(*vertex, mask(&x)).map_or(Value::Null, num);
            let row: Vec<Value> =
                next_step(&graph, *vertex, &x, eps)?.into_iter().map(|(y, w)| json!([y, num(w)])).collect();
            only_json(g, json!({"below": below, "value": value, "next_step": row}))
        }
        Command::Gadget(a) => cmd_gadget(g, a),
        Command::Sim(a) => cmd_sim(g, a),
        Command::Verify { suite } => {
            let report = verify::verify(suite, g.seed).ok_or_else(|| {
                usage(format!("unknown suite {suite}; expected one of {}", verify::SUITES.join(", ")))
            })?;
            let text = only_json(g, serde_json::to_value(&report).expect("report serialises"))?;
            if report.failures > 0 {
                return Err(CliError::Checks { report: text, failures: report.failures });
            }
            Ok(text)
        }
    }
}

fn only_json(g: &Global, v: Value) -> Result<String, CliError> {
    if g.format != Format::Json {
        return Err(usage("this subcommand only writes JSON"));
    }
    Ok(pretty(&v))
}

fn load_graph(g: &Global) -> Result<Graph, CliError> {
    let path = g.graph.as_ref().ok_or_else(|| usage("--graph is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(io::parse_graph(&text)?)
}

/// Parses `a/b` or a decimal into an exact rational.
fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || usage(format!("cannot parse bias {s}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len())))
}

fn eps_rational(g: &Global) -> Result<BigRational, CliError> {
    parse_rational(g.eps.as_deref().ok_or_else(|| usage("--eps is required"))?)
}

fn eps_f64(g: &Global) -> Result<f64, CliError> {
    let s = g.eps.as_deref().ok_or_else(|| usage("--eps is required"))?;
    if s.contains('/') {
        return Ok(parse_rational(s)?.to_f64().unwrap_or(f64::NAN));
    }
    s.trim().parse().map_err(|_| usage(format!("cannot parse bias {s}")))
}

fn vertex_set(g: &Graph, vs: &[usize]) -> Result<VertexSet, CliError> {
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        return Err(biaswalk_core::Error::VertexOutOfRange { vertex: v, n: g.n() }.into());
    }
    Ok(VertexSet::from_iter(g.n(), vs.iter().copied()))
}

fn mask(x: &VertexSet) -> u32 {
    x.iter().fold(0, |m, v| m | 1 << v)
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for this family")))
}

fn cmd_gen(g: &Global, a: &GenArgs) -> Result<String, CliError> {
    let fam = match a.family {
        Family::Path => GraphFamily::Path(need(a.n, "n")?),
        Family::Cycle => GraphFamily::Cycle(need(a.n, "n")?),
        Family::Star => GraphFamily::Star { leaves: need(a.n, "n")? },
        Family::Complete => GraphFamily::Complete(need(a.n, "n")?),
        Family::Bipartite => {
            let n = need(a.n, "n")?;
            GraphFamily::CompleteBipartite(n, a.m.unwrap_or(n))
        }
        Family::Petersen => GraphFamily::Petersen,
        Family::Ring => GraphFamily::Ring { units: need(a.units, "units")?, d: need(a.d, "d")? },
        Family::Gnp => GraphFamily::Gnp {
            n: need(a.n, "n")?,
            p: a.p.ok_or_else(|| usage("--p is required for gnp"))?,
            seed: g.seed,
        },
        Family::Bintree => GraphFamily::BinaryTree { depth: need(a.depth, "depth")? },
    };
    let graph = generate(&fam)?;
    match g.format {
        Format::Json => Ok(pretty(&io::graph_to_json(&graph))),
        Format::Dot => Ok(io::to_dot(&graph)),
        Format::Csv => Err(usage("gen writes JSON or DOT")),
    }
}

fn analysis(id: &str, graph: &Graph) -> Result<Value, CliError> {
    let s = graph.degree_stats();
    let prof = spectral_profile(graph)?;
    let pi = stationary(&srw_kernel(graph)?)?;
    Ok(json!({
        "graph_id": id,
        "n": graph.n(),
        "m": graph.edge_count(),
        "degree": {"min": s.d_min, "max": s.d_max, "avg": num(s.d_avg)},
        "connectivity": format!("{:?}", graph.connectivity()),
        "stationary": pi.iter().map(|&p| num(p)).collect::<Vec<_>>(),
        "profile": {
            "lambda_star": num(prof.lambda_star),
            "lambda2_lazy": num(prof.lambda2_lazy),
            "t_rel": num(prof.t_rel),
            "t_mix": prof.t_mix,
            "t_sep": prof.t_sep,
            "t_inf": prof.t_inf,
        },
    }))
}

fn cmd_analyze(g: &Global, use_library: bool) -> Result<String, CliError> {
    let graphs: Vec<(String, Graph)> = if use_library {
        library()
    } else {
        let path = g.graph.as_ref().ok_or_else(|| usage("--graph or --library is required"))?;
        let id = path.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
        vec![(id, load_graph(g)?)]
    };
    match g.format {
        Format::Csv => {
            let mut out = String::from(io::PROFILE_CSV_HEADER);
            out.push('\n');
            for (id, graph) in &graphs {
                out.push_str(&io::profile_csv_line(id, graph, &spectral_profile(graph)?));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = graphs.iter().map(|(id, graph)| analysis(id, graph)).collect::<Result<_, _>>()?;
            Ok(pretty(&if use_library { Value::Array(rows) } else { rows.into_iter().next().expect("one graph") }))
        }
        Format::Dot => Err(usage("analyze writes JSON or CSV")),
    }
}

fn boost_json<T: ToPrimitive>(b: &Boost<T>, eps: f64) -> Value {
    let p = b.p.to_f64().unwrap_or(f64::NAN);
    let q = b.q.to_f64().unwrap_or(f64::NAN);
    let bound = p.powf(1.0 - eps);
    json!({
        "p": num(p),
        "q": num(q),
        "bound": num(bound),
        "ratio": num(q / p),
        "potential": b.potential.iter().map(|&x| num(x)).collect::<Vec<_>>(),
    })
}

fn cmd_boost(g: &Global, start: usize, target: &[usize], horizon: usize, hit_by: bool, exact: bool) -> Result<String, CliError> {
    let graph = load_graph(g)?;
    let set = vertex_set(&graph, target)?;
    let pred = if hit_by { TrajectoryPredicate::hit_by(set, horizon) } else { TrajectoryPredicate::at_set(set, horizon) };
    let value = if exact {
        let eps = eps_rational(g)?;
        let b = trajectory_boost(&graph, start, &pred, &eps)?;
        let mut v = boost_json(&b, eps.to_f64().unwrap_or(f64::NAN));
        v["p_exact"] = b.p.to_string().into();
        v["q_exact"] = b.q.to_string().into();
        v
    } else {
        let eps = eps_f64(g)?;
        boost_json(&trajectory_boost(&graph, start, &pred, &eps)?, eps)
    };
    only_json(g, value)
}

fn cmd_hit(g: &Global, target: &[usize], stationary_mode: bool, vertex: Option<usize>) -> Result<String, CliError> {
    let graph = load_graph(g)?;
    let eps = eps_f64(g)?;
    let value = if stationary_mode {
        let v = vertex.ok_or_else(|| usage("--vertex is required with --stationary"))?;
        let (pi_q, b) = max_stationary(&graph, v, eps)?;
        let pi = stationary(&srw_kernel(&graph)?)?;
        let bias: Vec<Value> = (0..graph.n())
            .map(|x| graph.neighbours(x).iter().find(|&&y| b.get(x, y) > 0.5).map_or(Value::Null, |&y| y.into()))
            .collect();
        json!({"vertex": v, "pi": num(pi.get(v).copied().unwrap_or(f64::NAN)), "pi_q": num(pi_q), "bias": bias})
    } else {
        if target.is_empty() {
            return Err(usage("--target is required"));
        }
        let h = optimal_hitting_policy(&graph, &vertex_set(&graph, target)?, eps)?;
        json!({
            "values": h.values.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "choice": h.choice,
        })
    };
    only_json(g, value)
}

fn policy_json(p: &CoverPolicy) -> Value {
    let mut tables = Map::new();
    for (m, layer) in p.layers() {
        let mut row = Map::new();
        for v in 0..p.n() {
            if let Some(value) = p.value(v, *m) {
                row.insert(v.to_string(), json!({"value": num(value), "choice": layer.choice[v]}));
            }
        }
        tables.insert(format!("{m:x}"), Value::Object(row));
    }
    Value::Object(tables)
}

fn cmd_cover(g: &Global, start: usize, summary: bool) -> Result<String, CliError> {
    let graph = load_graph(g)?;
    let eps = eps_f64(g)?;
    let p = optimal_cover_policy(&graph, start, eps)?;
    let value = p.value(start, p.initial_mask()).unwrap_or(f64::NAN);
    let mut out = json!({"value": num(value), "start": start, "eps": num(eps)});
    if !summary {
        out["policy"] = policy_json(&p);
    }
    only_json(g, out)
}

fn gadget_graph(a: &GadgetArgs, g: &Global) -> Result<GadgetGraph, CliError> {
    Ok(match a.family {
        GadgetFamily::Quincunx => quincunx(need(a.l, "l")?)?,
        GadgetFamily::Hill => steep_hill(need(a.l, "l")?)?,
        GadgetFamily::Slowpath => slow_path(need(a.l, "l")?)?,
        GadgetFamily::Star => star_connector(need(a.l, "l")?, need(a.k, "k")?)?,
        GadgetFamily::Roundabout => roundabout(need(a.lp, "lp")?, need(a.lq, "lq")?, need(a.k, "k")?)?,
        GadgetFamily::Qsat => {
            let phi = load_cnf(a)?;
            qsat_graph(&phi, need(a.lp, "lp")?, need(a.lq, "lq")?, need(a.ls, "ls")?)?
        }
        GadgetFamily::Hamilton => hamilton_reduction(&hamilton_host(g)?, a.c.unwrap_or(1))?,
    })
}

fn load_cnf(a: &GadgetArgs) -> Result<biaswalk_core::gadget::QsatInstance, CliError> {
    let path = a.cnf.as_ref().ok_or_else(|| usage("--cnf is required for qsat"))?;
    let text = std::fs::read_to_string(path).map_err(|e| domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(io::parse_cnf(&text)?)
}

/// Host graph of the Hamilton reduction: `--graph`, or the triangle.
fn hamilton_host(g: &Global) -> Result<Graph, CliError> {
    match &g.graph {
        Some(_) => load_graph(g),
        None => Ok(generate(&GraphFamily::Complete(3))?),
    }
}

fn rational_json(x: &BigRational) -> Value {
    json!({"exact": x.to_string(), "value": num(x.to_f64().unwrap_or(f64::NAN))})
}

fn cmd_gadget(g: &Global, a: &GadgetArgs) -> Result<String, CliError> {
    if !a.certify {
        let gadget = gadget_graph(a, g)?;
        return match g.format {
            Format::Json => Ok(pretty(&io::gadget_to_json(&gadget))),
            Format::Dot => Ok(io::to_dot(&gadget.graph)),
            Format::Csv => Err(usage("gadget writes JSON or DOT")),
        };
    }
    let cert = match a.family {
        GadgetFamily::Slowpath => {
            let l = need(a.l, "l")?;
            let r = slow_path_report(l)?;
            let t = r.traversal.to_f64().unwrap_or(f64::NAN);
            let shifted = r.shifted_form.to_f64().unwrap_or(f64::NAN);
            json!({
                "family": "slowpath",
                "l": l,
                "traversal": num(t),
                "traversal_exact": r.traversal.to_string(),
                "closed_form": rational_json(&r.closed_form),
                "shifted_form": rational_json(&r.shifted_form),
                "matches_closed_form": r.matches_closed_form,
                "matches_shifted_form": r.matches_shifted_form,
                "note": format!(
                    "the traversal time is (11/3)(8/5)^l - 5/3; the form with -2/3 gives {} at l = {l}, not {}",
                    fmt_sig(shifted),
                    fmt_sig(t)
                ),
            })
        }
        GadgetFamily::Quincunx => {
            let l = need(a.l, "l")?;
            let eps = match &g.eps {
                Some(_) => eps_rational(g)?,
                None => BigRational::new(1.into(), 4.into()),
            };
            let p = quincunx_success(l, &eps)?;
            let bound = 1.0 - 0.99f64.powi(l as i32);
            let opt = quincunx_optimum(l, eps.to_f64().unwrap_or(f64::NAN))?;
            json!({
                "family": "quincunx",
                "l": l,
                "eps": eps.to_string(),
                "success": rational_json(&p),
                "optimum": num(opt),
                "bound": num(bound),
                "holds": p.to_f64().unwrap_or(f64::NAN) >= bound,
            })
        }
        GadgetFamily::Star => {
            let (l, k) = (need(a.l, "l")?, need(a.k, "k")?);
            let s = octopus_stats(l, k)?;
            json!({
                "family": "star",
                "l": l,
                "k": k,
                "residence": num(s.residence),
                "nexus_prob": num(s.nexus_prob),
                "nexus_bound": num(s.nexus_bound),
                "holds": s.holds,
            })
        }
        GadgetFamily::Qsat => {
            let phi = load_cnf(a)?;
            let t = tsat_tunsat(&phi, need(a.lp, "lp")?)?;
            json!({
                "family": "qsat",
                "slow_path": num(t.slow_path),
                "t_sat": num(t.t_sat),
                "t_unsat": num(t.t_unsat),
                "threshold": num(t.threshold),
            })
        }
        GadgetFamily::Hamilton => {
            let eps = if g.eps.is_some() { eps_f64(g)? } else { GADGET_EPS };
            let c = a.c.unwrap_or(1);
            let r = hamilton_crossing_check(&hamilton_host(g)?, c, eps)?;
            json!({
                "family": "hamilton",
                "c": c,
                "eps": num(r.eps),
                "lower": num(r.lower),
                "upper": num(r.upper),
                "min_escape": num(r.min_escape),
                "max_crossing": num(r.max_crossing),
                "holds": r.holds,
            })
        }
        GadgetFamily::Hill | GadgetFamily::Roundabout => {
            return Err(domain("this family has no certificate; certify its slow paths and quincunxes"));
        }
    };
    only_json(g, cert)
}

fn cmd_sim(g: &Global, a: &SimArgs) -> Result<String, CliError> {
    let graph = load_graph(g)?;
    let eps = eps_f64(g)?;
    let target = (!a.target.is_empty()).then(|| vertex_set(&graph, &a.target)).transpose()?;
    let stop = match (&target, a.horizon) {
        (Some(t), _) => Stop::Hit(t),
        (None, Some(h)) => Stop::Horizon(h),
        (None, None) => Stop::Cover,
    };
    let hitting;
    let cover;
    let strategy = match (a.strategy, &stop) {
        (SimStrategy::None, _) => Strategy::None,
        (SimStrategy::Optimal, Stop::Hit(t)) => {
            hitting = optimal_hitting_policy(&graph, t, eps)?.bias_matrix(&graph)?;
            Strategy::Bias(&hitting)
        }
        (SimStrategy::Optimal, Stop::Cover) => {
            cover = optimal_cover_policy(&graph, a.start, eps)?;
            Strategy::Cover(&cover)
        }
        (SimStrategy::Optimal, Stop::Horizon(_)) => {
            return Err(usage("the optimal strategy needs --target or a cover stop"));
        }
        (SimStrategy::Phase, Stop::Cover) => Strategy::None,
        (SimStrategy::Phase, _) => return Err(usage("the phase strategy only covers")),
    };
    let phase = a.strategy == SimStrategy::Phase;
    let times: Vec<usize> = (0..a.replicates as u64)
        .into_par_iter()
        .map(|r| {
            if phase {
                // Phase walks draw their own substreams, so each replicate
                // gets a derived seed.
                let s = biaswalk_core::rng::substream(g.seed, r).next_u64();
                phase_cover_strategy(&graph, a.start, eps, s).map(|t| t.steps())
            } else {
                replicate(&graph, a.start, strategy, eps, stop, g.seed, r).map(|t| t.steps())
            }
        })
        .collect::<Result<_, _>>()?;
    match g.format {
        Format::Csv => {
            let mut out = String::from("replicate,stop_time\n");
            for (r, t) in times.iter().enumerate() {
                out.push_str(&format!("{r},{t}\n"));
            }
            Ok(out)
        }
        Format::Json => {
            let samples: Vec<f64> = times.iter().map(|&t| t as f64).collect();
            let e = Estimate::from_samples(&samples, g.seed)?;
            Ok(pretty(&json!({"mean": num(e.mean), "se": num(e.se), "replicates": e.replicates, "seed": e.seed})))
        }
        Format::Dot => Err(usage("sim writes CSV or JSON")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bias_parsing() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("1").unwrap(), BigRational::new(1.into(), 1.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert!(matches!(execute(["biaswalk", "gen", "--family", "path", "--bogus"]), Err(CliError::Usage(_))));
        assert!(matches!(execute(["biaswalk", "frobnicate"]), Err(CliError::Usage(_))));
    }
}
