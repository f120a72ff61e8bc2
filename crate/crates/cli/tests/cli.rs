use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcolor::families::{clique_coloring, hypercube_coloring};
use qcolor::format::{coloring_json, parse_graph};
use qcolor::EdgeColoring;
use serde_json::Value;
use tempfile::TempDir;

fn qcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(out)))
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    /// Runs `gen` into a file and returns its path.
    fn gen(&self, name: &str, args: &[&str]) -> String {
        let p = self.path(name);
        let mut all = vec!["gen"];
        all.extend_from_slice(args);
        all.extend_from_slice(&["--out", p.to_str().unwrap()]);
        let out = qcolor(&all);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        p.to_str().unwrap().to_string()
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn tree_method_matches_exact_on_a_random_tree() {
    let w = Work::new();
    let t = w.gen("t.txt", &["random-tree", "12", "--seed", "7"]);
    let tree = json(&qcolor(&["solve", &t, "--method", "tree"]));
    let exact = json(&qcolor(&["solve", &t, "--method", "exact"]));
    assert_eq!(tree["value"], exact["value"]);
    assert_eq!(tree["method"], "tree");
    let audit = json(&qcolor(&["solve", &t, "--method", "tree", "--audit-linear-scan"]));
    assert_eq!(audit["value"], tree["value"]);
    // auto picks the tree solver
    assert_eq!(json(&qcolor(&["solve", &t]))["method"], "tree");
}

#[test]
fn exact_on_k6() {
    let w = Work::new();
    let k6 = w.gen("k6.txt", &["clique", "6"]);
    let out = qcolor(&["solve", &k6, "--method", "exact", "--order", "degree"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["value"], 5);
    assert_eq!(report["colors"].as_array().unwrap().len(), 15);
    for key in ["value", "method", "colors", "lower_bound"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn exhausted_budget_prints_incumbent() {
    let w = Work::new();
    let g = w.gen("k7.txt", &["clique", "7"]);
    let out = qcolor(&["solve", &g, "--method", "exact", "--time-budget", "0"]);
    assert_eq!(code(&out), 4);
    let report = json(&out);
    assert_eq!(report["proven_optimal"], false);
    assert_eq!(report["colors"].as_array().unwrap().len(), 21);
}

#[test]
fn planar_grid_report_validates() {
    let w = Work::new();
    let g = w.gen("grid.txt", &["grid", "20", "20", "--with-embedding"]);
    let out = qcolor(&["solve", &g, "--method", "planar"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    for key in ["separator_size", "num_components", "epsilon_used"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    let col = w.write("col.json", &stdout(&out));
    assert_eq!(code(&qcolor(&["validate", &g, &col])), 0);

    // embedding from a separate file, explicit epsilon
    let plain = w.gen("plain.txt", &["grid", "20", "20"]);
    let out = qcolor(&["solve", &plain, "--method", "planar", "--embedding", &g, "--epsilon", "1/10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["epsilon_used"], 0.1);
    assert_eq!(json(&out)["component_limit"], 40);
}

#[test]
fn auto_uses_planar_with_embedding_and_trivial_when_large() {
    let w = Work::new();
    let g = w.gen("rp.txt", &["random-planar", "300", "--seed", "3", "--with-embedding"]);
    assert_eq!(json(&qcolor(&["solve", &g]))["method"], "planar");
    let k = w.gen("k9.txt", &["clique", "9"]);
    assert_eq!(json(&qcolor(&["solve", &k]))["method"], "trivial");
    let k = w.gen("k4.txt", &["clique", "4"]);
    assert_eq!(json(&qcolor(&["solve", &k]))["value"], 3);
}

#[test]
fn method_input_mismatches_exit_3() {
    let w = Work::new();
    let k = w.gen("k4.txt", &["clique", "4"]);
    assert_eq!(code(&qcolor(&["solve", &k, "--method", "tree"])), 3);
    assert_eq!(code(&qcolor(&["solve", &k, "--method", "planar", "--q", "3"])), 3);
    assert_eq!(code(&qcolor(&["solve", &k, "--method", "exact", "--max-edges", "5"])), 3);
}

#[test]
fn bad_input_exits_2() {
    let w = Work::new();
    assert_eq!(code(&qcolor(&["solve", s(&w.path("missing.txt"))])), 2);
    let bad = w.write("bad.txt", "p qcolor 2 1 2\ne 0 0\n");
    assert_eq!(code(&qcolor(&["solve", &bad])), 2);
    assert_eq!(code(&qcolor(&["gen", "random-tree", "5"])), 2);
    let g = w.gen("k3.txt", &["clique", "3"]);
    assert_eq!(code(&qcolor(&["solve", &g, "--method", "planar", "--epsilon", "2"])), 2);
}

#[test]
fn validate_verdicts() {
    let w = Work::new();
    let star = w.write("star.txt", "p qcolor 4 3 2\ne 0 1\ne 0 2\ne 0 3\n");
    let good = w.write("good.json", "{\"colors\": [0, 0, 1]}");
    let bad = w.write("bad.json", "[0, 1, 2]");
    let short = w.write("short.json", "[0, 1]");
    assert_eq!(code(&qcolor(&["validate", &star, &good])), 0);
    let out = qcolor(&["validate", &star, &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["first_violation"], 0);
    assert_eq!(code(&qcolor(&["validate", &star, &bad, "--q", "3"])), 0);
    assert_eq!(code(&qcolor(&["validate", &star, &short])), 2);
}

fn dot_colors(dot: &str) -> HashSet<String> {
    dot.lines()
        .filter(|l| l.contains(" -- "))
        .map(|l| l.split("color=\"").nth(1).unwrap().split('"').next().unwrap().to_string())
        .collect()
}

#[test]
fn dot_export() {
    let w = Work::new();
    let k6 = w.gen("k6.txt", &["clique", "6"]);
    let col = w.write("k6.json", &coloring_json(&clique_coloring(6).unwrap()).to_string());
    let out = qcolor(&["export-dot", &k6, &col]);
    assert_eq!(code(&out), 0);
    assert_eq!(dot_colors(&stdout(&out)).len(), 3);

    let q3 = w.gen("q3.txt", &["hypercube", "3"]);
    let hc = hypercube_coloring(3).unwrap();
    let col = w.write("q3.json", &coloring_json(&hc).to_string());
    let out = stdout(&qcolor(&["export-dot", &q3, &col]));
    assert_eq!(dot_colors(&out).len(), hc.num_colors());

    let edge = w.write("edge.txt", "p qcolor 2 1 2\ne 0 1\n");
    let col = w.write("edge.json", "[0]");
    let out = stdout(&qcolor(&["export-dot", &edge, &col]));
    assert_eq!(out.lines().filter(|l| l.contains(" -- ")).count(), 1);
    assert_eq!(code(&qcolor(&["export-dot", &k6, &w.write("x.json", "[0]")])), 2);
}

#[test]
fn generated_files_round_trip() {
    let w = Work::new();
    let g = w.gen("rp.txt", &["random-planar", "50", "--seed", "1", "--with-embedding"]);
    let text = std::fs::read_to_string(&g).unwrap();
    let parsed = parse_graph(&text).unwrap();
    let (graph, emb) = qcolor::families::random_planar(50, 1);
    assert_eq!(parsed.graph, graph);
    assert_eq!(parsed.embedding.unwrap(), emb);
    // same seed, same bytes
    let again = w.gen("rp2.txt", &["random-planar", "50", "--seed", "1", "--with-embedding"]);
    assert_eq!(std::fs::read_to_string(again).unwrap(), text);
}

#[test]
fn reduce_and_check() {
    let w = Work::new();
    let f = w.write("phi.txt", "f 3 1\nc 0 1 2\n");
    let inst = w.path("inst.txt");
    let out = qcolor(&["reduce", &f, "--general", "--out", s(&inst)]);
    assert_eq!(code(&out), 0);
    let parsed = parse_graph(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(parsed.graph.m(), 24);
    let roles: Value =
        serde_json::from_str(&std::fs::read_to_string(w.path("inst.txt.roles.json")).unwrap()).unwrap();
    assert_eq!(roles["L"], 7);
    assert_eq!(roles["roles"].as_array().unwrap().len(), parsed.graph.n());

    let solved = json(&qcolor(&["solve", s(&inst), "--method", "exact"]));
    assert!(solved["value"].as_u64().unwrap() <= 7);

    let out = qcolor(&["reduce", &f, "--uniform", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("p qcolor "));

    let out = qcolor(&["check-reduction", &f]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "agree");

    let unsat = w.write("unsat.txt", "f 4 4\nc 0 1 2\nc 0 1 3\nc 0 2 3\nc 1 2 3\n");
    let report = json(&qcolor(&["check-reduction", &unsat]));
    assert_eq!(report["sat"], false);
    assert_eq!(report["verdict"], "agree");

    let unused = w.write("unused.txt", "f 4 1\nc 0 1 2\n");
    assert_eq!(code(&qcolor(&["reduce", &unused, "--general"])), 3);
    let repeated = w.write("rep.txt", "f 3 1\nc 0 1 1\n");
    assert_eq!(code(&qcolor(&["reduce", &repeated, "--general"])), 2);
}

#[test]
fn bounds_document() {
    let w = Work::new();
    let k6 = w.gen("k6.txt", &["clique", "6"]);
    let b = json(&qcolor(&["bounds", &k6]));
    assert_eq!(b["max_degree_bound"], 3);
    assert_eq!(b["avg_degree_bound_real"], "25/8");
    assert_eq!(b["avg_degree_bound"], 4);
    assert_eq!(b["best"], 4);
    let star = w.write("star.txt", "p qcolor 9 8 2\ne 0 1\ne 0 2\ne 0 3\ne 0 4\ne 0 5\ne 0 6\ne 0 7\ne 0 8\n");
    assert_eq!(json(&qcolor(&["bounds", &star]))["tree_interval"], serde_json::json!([4, 7]));
}

#[test]
fn solve_output_formats() {
    let w = Work::new();
    let g = w.gen("k4.txt", &["clique", "4"]);
    let raw: Vec<usize> = serde_json::from_slice(&qcolor(&["solve", &g, "--format", "raw"]).stdout).unwrap();
    assert_eq!(EdgeColoring::new(raw).max_group(), 3);
    let dot = stdout(&qcolor(&["solve", &g, "--format", "dot"]));
    assert!(dot.starts_with("graph qcolor {"));
}
