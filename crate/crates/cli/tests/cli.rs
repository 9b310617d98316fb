use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biaswalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("biaswalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn triangle() -> PathBuf {
    let out = run(&["gen", "--family", "complete", "--n", "3"]);
    scratch("k3.json", &String::from_utf8(out.stdout).unwrap())
}

#[test]
fn cover_of_the_triangle() {
    let k3 = triangle();
    let v = json(&run(&["cover", "--graph", k3.to_str().unwrap(), "--eps", "0.25"]));
    assert_eq!(v["value"].as_f64(), Some(2.6));
    assert!(v["policy"]["1"]["0"]["choice"].is_number());
}

#[test]
fn slow_path_certificate() {
    let v = json(&run(&["gadget", "--family", "slowpath", "--l", "1", "--certify"]));
    assert_eq!(v["traversal"].as_f64(), Some(4.2));
    assert_eq!(v["shifted_form"]["value"].as_f64(), Some(5.2));
    assert_eq!(v["matches_shifted_form"], Value::Bool(false));
    assert!(v["note"].as_str().unwrap().contains("5.2"));
}

#[test]
fn exact_boost_on_figure_one() {
    let g = r#"{"directed":false,"n":6,"edges":[[0,1],[0,4],[0,2],[2,3],[2,5],[1,3],[1,5],[5,4]]}"#;
    let path = scratch("fig1.json", g);
    let args = ["boost", "--graph", path.to_str().unwrap(), "--eps", "1/3", "--target", "4,5", "--horizon", "2", "--exact"];
    let v = json(&run(&args));
    assert_eq!(v["p_exact"], "7/18");
    assert_eq!(v["q_exact"], "50/81");
    assert!(v["q"].as_f64().unwrap() >= v["bound"].as_f64().unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["gen", "--family", "path", "--n", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--family", "path", "--n", "0"]).status.code(), Some(1));
    assert_eq!(run(&["gadget", "--family", "quincunx", "--l", "4"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_suites_are_deterministic() {
    let a = run(&["verify", "--suite", "anticonvexity", "--seed", "42"]);
    let b = run(&["verify", "--suite", "anticonvexity", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["failures"], 0);
    let g = json(&run(&["verify", "--suite", "gadgets"]));
    let notes: Vec<&Value> = g["checks"].as_array().unwrap().iter().filter(|c| c["informational"] == true).collect();
    assert!(notes.iter().any(|c| c["detail"].as_str().unwrap().contains("5.2")));
}

#[test]
fn simulation_outputs() {
    let k3 = triangle();
    let k3 = k3.to_str().unwrap();
    let csv = run(&["sim", "--graph", k3, "--eps", "0.25", "--strategy", "optimal", "--replicates", "5", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("replicate,stop_time\n0,"));
    assert_eq!(text.lines().count(), 6);
    let v = json(&run(&["sim", "--graph", k3, "--eps", "0.25", "--strategy", "optimal", "--replicates", "20000", "--seed", "9"]));
    let (mean, se) = (v["mean"].as_f64().unwrap(), v["se"].as_f64().unwrap());
    assert!((mean - 2.6).abs() <= 3.0 * se, "{mean} {se}");
    let again = run(&["sim", "--graph", k3, "--eps", "0.25", "--strategy", "optimal", "--replicates", "20000", "--seed", "9"]);
    assert_eq!(json(&again), v);
}

#[test]
fn qsat_gadget_from_cnf() {
    let cnf = scratch("phi.cnf", "c sample\np cnf 4 3\n-1 2 -3 0\n1 -2 4 0\n1 3 -4 0\n");
    let v = json(&run(&["gadget", "--family", "qsat", "--cnf", cnf.to_str().unwrap(), "--lp", "2", "--lq", "3", "--ls", "2"]));
    assert_eq!(v["ports"]["star_ports"].as_array().unwrap().len(), 18);
    assert_eq!(v["unvisited"].as_array().unwrap().len(), 36);
    let t = json(&run(&["gadget", "--family", "qsat", "--cnf", cnf.to_str().unwrap(), "--lp", "3", "--certify"]));
    assert!(t["t_sat"].as_f64() < t["t_unsat"].as_f64());
}

#[test]
fn analysis_and_output_formats() {
    let k3 = triangle();
    let v = json(&run(&["analyze", "--graph", k3.to_str().unwrap()]));
    assert_eq!(v["profile"]["lambda_star"].as_f64(), Some(0.5));
    let csv = String::from_utf8(run(&["analyze", "--library", "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("graph_id,n,m,lambda_star"));
    assert!(csv.contains("\npetersen,10,15,"));
    let dot = String::from_utf8(run(&["gen", "--family", "path", "--n", "2", "--format", "dot"]).stdout).unwrap();
    assert!(dot.contains("0 -- 1;"));
    let out = scratch("written.json", "");
    assert!(run(&["gen", "--family", "petersen", "--out", out.to_str().unwrap()]).stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"n\": 10"));
}

#[test]
fn decision_queries() {
    let c5 = scratch("c5.json", &String::from_utf8(run(&["gen", "--family", "cycle", "--n", "5"]).stdout).unwrap());
    let c5 = c5.to_str().unwrap();
    let v = json(&run(&["beststep", "--graph", c5, "--eps", "0.5", "--visited", "0", "--y", "1", "--z", "4"]));
    assert_eq!(v["better"], false);
    assert_eq!(v["value_y"], v["value_z"]);
    let v = json(&run(&["cost", "--graph", c5, "--eps", "0.5", "--visited", "0,1", "--vertex", "1", "--threshold", "100"]));
    assert_eq!(v["below"], true);
    let h = json(&run(&["hit", "--graph", c5, "--eps", "0.5", "--target", "0"]));
    assert_eq!(h["values"][0].as_f64(), Some(0.0));
    let s = json(&run(&["hit", "--graph", c5, "--eps", "0.5", "--stationary", "--vertex", "0"]));
    assert!(s["pi_q"].as_f64() > s["pi"].as_f64());
}
