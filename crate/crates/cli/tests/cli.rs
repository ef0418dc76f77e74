use std::process::{Command, Output};

use resistweave::io::parse_edge_list;
use serde_json::Value;

fn resistweave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resistweave"))
        .args(args)
        .env_remove("RESISTWEAVE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn generate_writes_edge_lists() {
    let out = resistweave(&["generate", "--graph", "complete", "--n", "5"]);
    assert!(out.status.success());
    let g = parse_edge_list(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(g.edge_count(), 10);

    let out = resistweave(&["generate", "--graph", "hypercube", "--dim", "3"]);
    let g = parse_edge_list(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!((g.n(), g.edge_count(), g.regular_unweighted_degree()), (8, 12, Some(3)));

    let out = resistweave(&["generate", "--graph", "random-regular", "--n", "100", "--degree", "20", "--seed", "4"]);
    let g = parse_edge_list(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(g.regular_unweighted_degree(), Some(20));
    assert!(g.edges().all(|e| e.mult == 1 && !e.is_loop()));
}

#[test]
fn generated_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let out = resistweave(&["generate", "--graph", "circulant", "--n", "12", "--offsets", "1,3", "--out", p]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    let out = resistweave(&["generate", "--input", p]);
    assert_eq!(std::str::from_utf8(&out.stdout).unwrap(), first);
}

#[test]
fn invalid_epsilon_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = resistweave(&[
        "sparsify", "--n", "20", "--epsilon", "1.5", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!path.exists());
}

#[test]
fn infeasible_generator_exits_2() {
    let out = resistweave(&["generate", "--graph", "random-regular", "--n", "5", "--degree", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sparsify_complete_100() {
    let out = resistweave(&["sparsify", "--n", "100", "--epsilon", "0.1", "--seed", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert!(r["trials"][0]["errors"]["max"].is_number());
    assert_eq!(r["trials"][0]["interval"]["holds"], true);
}

#[test]
fn reports_are_deterministic_per_seed() {
    let args = ["experiment", "--n", "41", "--d-target", "6", "--trials", "3", "--seed", "9"];
    let a = resistweave(&args);
    let b = resistweave(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_env() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_resistweave"))
            .args(["sparsify", "--n", "31", "--d-target", "4"])
            .env("RESISTWEAVE_SEED", seed)
            .output()
            .unwrap()
    };
    let a = json(&run("5"));
    let b = json(&resistweave(&["sparsify", "--n", "31", "--d-target", "4", "--seed", "5"]));
    assert_eq!(a, b);
    assert_eq!(a["config"]["seed"], 5);
    assert_ne!(json(&run("6")), b);
}

#[test]
fn csv_output_has_fixed_header() {
    let out = resistweave(&["sparsify", "--n", "21", "--d-target", "6", "--trials", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,u,v,R_G,R_H,rel_err"));
    assert_eq!(lines.count(), 2 * 21 * 20 / 2);
}

#[test]
fn certify_hypercube_potential_strictly_decreases() {
    let out = resistweave(&["certify", "--graph", "hypercube", "--dim", "4", "--trials", "2", "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    for t in r["trials"].as_array().unwrap() {
        let psi: Vec<f64> = t["transcript"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["psi_after"].as_f64().unwrap())
            .collect();
        assert!(!psi.is_empty());
        assert!(psi.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn decompose_emits_blocks() {
    let out = resistweave(&["decompose", "--graph", "petersen"]);
    assert!(out.status.success());
    let blocks = resistweave::io::parse_blocks(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(blocks.len(), 3);
    assert!(blocks.iter().all(|m| m.n() == 20 && m.edge_count() == 10));

    let out = resistweave(&["decompose", "--n", "9", "--elements", "cycles"]);
    assert!(out.status.success());
    let blocks = resistweave::io::parse_blocks(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(blocks.len(), 4);
}

#[test]
fn resist_reports_all_pairs() {
    let out = resistweave(&["resist", "--n", "4", "--format", "json"]);
    let r = json(&out);
    assert!((r["resistance"][0][1].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn runtime_errors_become_error_objects() {
    let out = resistweave(&["sparsify", "--n", "10", "--d-target", "20"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["error"]["kind"], "InsufficientElements");
}
