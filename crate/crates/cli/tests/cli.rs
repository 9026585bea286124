use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clustering-games"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn gen_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

const INCONSISTENT_TRIANGLE: &str = r#"{
  "n": 3,
  "colors": 2,
  "edges": [
    {"u": 0, "v": 1, "kind": "coord", "w": "1", "alpha": ["1/3", "2/3"]},
    {"u": 1, "v": 2, "kind": "coord", "w": "1", "alpha": ["1/2", "1/2"]},
    {"u": 0, "v": 2, "kind": "coord", "w": "1", "alpha": ["1/2", "1/2"]}
  ]
}"#;

#[test]
fn bipartite_tightness_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "bt.json");
    gen_ok(&[
        "gen",
        "--construction",
        "bipartite-tightness",
        "--l",
        "2",
        "--r",
        "3",
        "--out",
        &game,
    ]);
    let v = json_ok(&["poa", "--game", &game, "--eps", "1", "--k", "1"]);
    assert_eq!(v["poa"], "17/5");
    assert_eq!(v["bounds"]["density"], "17/5");
}

#[test]
fn triangle_density_construction() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "tri.json");
    gen_ok(&[
        "gen",
        "--construction",
        "density-lb",
        "--family",
        "triangle",
        "--out",
        &game,
    ]);
    let v = json_ok(&["poa", "--game", &game, "--eps", "1", "--k", "1"]);
    assert_eq!(v["poa"], "3/1");
    let c = json_ok(&["classify", "--game", &game]);
    assert_eq!(c["verdict"], "gws");
    let a = json_ok(&["analyze", "--game", &game]);
    assert_eq!(a["density"], "1/1");
    assert_eq!(a["chromatic"], 3);
    assert_eq!(a["matching_size"], 1);
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "r.json");
    let args = [
        "gen",
        "--construction",
        "random",
        "--n",
        "7",
        "--p",
        "1/2",
        "--seed",
        "9",
        "--c",
        "3",
        "--rule",
        "random-positive",
        "--kinds",
        "mixed",
        "--weight-max",
        "4",
        "--out",
        &game,
    ];
    gen_ok(&args);
    let first = std::fs::read_to_string(&game).unwrap();
    gen_ok(&args);
    assert_eq!(first, std::fs::read_to_string(&game).unwrap());
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["meta"]["seed"], 9);
}

#[test]
fn violation_builds_cycle_and_no_pne_games() {
    let dir = tempfile::tempdir().unwrap();
    let rule = path(dir.path(), "rule.json");
    std::fs::write(&rule, INCONSISTENT_TRIANGLE).unwrap();
    let c = json_ok(&["classify", "--game", &rule]);
    assert_eq!(c["verdict"], "violation");
    assert_eq!(c["witness"]["type"], "inconsistent_cycle");

    let cyc = path(dir.path(), "cyc.json");
    gen_ok(&[
        "gen",
        "--construction",
        "br-cycle",
        "--game",
        &rule,
        "--out",
        &cyc,
    ]);
    let b = json_ok(&["br-graph", "--game", &cyc]);
    assert_eq!(b["result"], "cycle");
    assert!(b["cycle"].as_array().unwrap().len() >= 2);

    let nopne = path(dir.path(), "nopne.json");
    gen_ok(&[
        "gen",
        "--construction",
        "no-pne",
        "--game",
        &rule,
        "--out",
        &nopne,
    ]);
    let p = json_ok(&["poa", "--game", &nopne]);
    assert_eq!(p["poa"], "none");
}

#[test]
fn equal_split_br_graph_is_acyclic() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "p.json");
    gen_ok(&[
        "gen",
        "--construction",
        "plain",
        "--family",
        "cycle:4",
        "--c",
        "2",
        "--out",
        &game,
    ]);
    assert_eq!(json_ok(&["br-graph", "--game", &game])["result"], "acyclic");
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "p.json");
    gen_ok(&[
        "gen",
        "--construction",
        "plain",
        "--family",
        "petersen",
        "--c",
        "2",
        "--out",
        &game,
    ]);
    let out = run(&["analyze", "--game", &game, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "density,coord_density,max_degree,chromatic,matching_size"
    );
    assert_eq!(lines[1], "3/2,3/2,3,3,5");
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(
        &bad,
        r#"{"n": 2, "colors": 2, "edges": [{"u": 0, "v": 5, "kind": "coord", "w": "1"}]}"#,
    )
    .unwrap();
    let out = run(&["analyze", "--game", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["file"], bad.as_str());
    assert_eq!(err["edge"], 0);

    let out = run(&["poa", "--game", &bad, "--eps", "x/y"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "Usage");
}

#[test]
fn caps_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "k.json");
    gen_ok(&[
        "gen",
        "--construction",
        "plain",
        "--family",
        "complete:6",
        "--c",
        "2",
        "--out",
        &game,
    ]);
    let out = run(&["poa", "--game", &game, "--cap-profiles", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "SearchSpaceExceeded");
    let out = run(&["analyze", "--game", &game, "--cap-chromatic", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = path(dir.path(), "exp");
    let args = [
        "experiment",
        "--name",
        "dense-poa",
        "--trials",
        "2",
        "--n",
        "24",
        "--cs",
        "4,8",
        "--seed",
        "3",
        "--out",
        &out_dir,
    ];
    let summary = json_ok(&args);
    assert_eq!(summary["rows"], 4);
    let csv = std::fs::read_to_string(dir.path().join("exp/dense-poa.csv")).unwrap();
    assert!(csv.starts_with("c,trial,seed,edges,q,"));
    assert_eq!(csv.lines().count(), 5);
    assert!(dir.path().join("exp/dense-poa.summary.json").exists());
    json_ok(&args);
    let again = std::fs::read_to_string(dir.path().join("exp/dense-poa.csv")).unwrap();
    let strip = |s: &str| {
        s.lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&csv), strip(&again));

    let out = run(&["experiment", "--name", "nope", "--out", &out_dir]);
    assert_eq!(out.status.code(), Some(1));
}
