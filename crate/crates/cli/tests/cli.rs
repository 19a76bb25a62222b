use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gadget_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gadgets")
}

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sigma-forge"));
    cmd.args(args).env_remove("SIGMA_FORGE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_lucky_odd_cycle() {
    let r = run(&["solve", "--mode", "lucky", path(&data("c5.graph"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["verdict"], "pass");
    assert_eq!(r.report["results"]["solve"]["value"], 3);
    assert_eq!(r.report["command"], "solve");
    assert_eq!(r.report["budgets"]["nodes"], 100_000_000);
    assert_eq!(r.report["inputs"]["graph"].as_str().unwrap().len(), 64);
}

#[test]
fn solve_sigma_path_is_one() {
    let r = run(&["solve", "--mode", "sigma", path(&data("p3.graph"))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["solve"]["value"], 1);
}

#[test]
fn solve_sigma_triangle_capped_at_two() {
    let r = run(&["solve", "--mode", "sigma", "--max-k", "2", path(&data("k3.graph"))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["solve"]["value"], Value::Null);
    assert_eq!(r.report["results"]["solve"]["exhausted"], true);
}

#[test]
fn budget_comes_from_the_environment() {
    let r = run_env(&["solve", "--mode", "lucky", path(&data("c5.graph"))], &[("SIGMA_FORGE_BUDGET", "1")]);
    assert_eq!(r.report["budgets"]["nodes"], 1);
    assert_eq!(r.report["verdict"], "inconclusive");
    assert_ne!(r.code, 0);
}

#[test]
fn parse_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "3 2\n0 1\n").unwrap();
    let r = run(&["solve", "--mode", "sigma", path(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);
}

#[test]
fn minpart_on_an_even_cycle() {
    let r = run(&["minpart", path(&data("c4.graph"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["results"]["minpart"]["min_size"], 1);
}

#[test]
fn roundtrip_nae() {
    for (file, sat) in [("tiny.cnf", true), ("two.cnf", true), ("forced-equal.cnf", false)] {
        let r = run(&["roundtrip", "--reduction", "nae3sat", path(&data(file))]);
        assert_eq!(r.code, 0, "{file}: {}", r.stderr);
        assert_eq!(r.report["results"]["nae_satisfiable"], sat);
        assert_eq!(r.report["results"]["two_labels"], sat);
    }
}

#[test]
fn roundtrip_cubic_one_in_three() {
    let r = run(&["roundtrip", "--reduction", "cubic1in3", path(&data("all-same.cnf"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["results"]["min_part"], r.report["results"]["threshold"]);
    assert_eq!(r.report["results"]["threshold"], 44);
    let r = run(&["roundtrip", "--reduction", "cubic1in3", path(&data("no-one-in-three.cnf"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.report["results"]["min_part"].as_u64() > r.report["results"]["threshold"].as_u64());
}

#[test]
fn roundtrip_maxcut() {
    let r = run(&["roundtrip", "--reduction", "maxcut", path(&data("tiny.cnf"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["results"]["max_cut"], 11);
    let r = run(&["roundtrip", "--reduction", "maxcut", path(&data("forced-equal.cnf"))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["max_cut"], 10);
}

#[test]
fn reduce_writes_graph_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let r = run(&["reduce", "nae3sat", path(&data("tiny.cnf")), "-o", path(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let g = sigma_forge::parse_graph(&text).unwrap();
    assert!(g.is_k_regular(3));
    assert_eq!(r.report["results"]["vertices"], g.vertex_count());
    assert_eq!(r.report["results"]["traceback"]["params"]["kind"], "nae3sat");

    let r = run(&["reduce", "sigmak", path(&data("k3.graph")), "--k", "2"]);
    assert_eq!(r.report["results"]["vertices"], 16);
    let r = run(&["reduce", "remark2", "--k", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["vertices"], 18);
    let r = run(&["reduce", "cubic1in3", path(&data("all-same.cnf"))]);
    assert_eq!(r.report["results"]["vertices"], 90);
    let r = run(&["reduce", "maxcut", path(&data("tiny.cnf"))]);
    assert_eq!(r.report["results"]["threshold"], 11);
    assert_eq!(r.report["results"]["weighted_edges"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let a = run(&["roundtrip", "--reduction", "nae3sat", path(&data("two.cnf"))]);
    let b = run(&["roundtrip", "--reduction", "nae3sat", path(&data("two.cnf"))]);
    assert_eq!(strip(a.report), strip(b.report));
}

#[test]
fn oracle_commands() {
    let r = run(&["oracle", "nae", path(&data("tiny.cnf"))]);
    assert_eq!(r.report["results"]["satisfiable"], true);
    let r = run(&["oracle", "one-in-three", path(&data("no-one-in-three.cnf"))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["satisfiable"], false);
    let r = run(&["oracle", "maxcut", path(&data("c5.graph"))]);
    assert_eq!(r.report["results"]["max_cut"]["size"], 4);
}

fn shipped(prefix: &str) -> PathBuf {
    std::fs::read_dir(gadget_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_str().unwrap().starts_with(prefix))
        .expect("shipped bundle")
}

#[test]
fn certify_shipped_bundles() {
    for prefix in ["t-gadget-", "s-link-", "variable-gadget-1-1-", "variable-gadget-2-2-", "theta-gadget-"] {
        let r = run(&["certify", path(&shipped(prefix))]);
        assert_eq!(r.code, 0, "{prefix}: {}", r.stderr);
        assert_eq!(r.report["results"]["matches_stored"], true);
    }
}

#[test]
fn certify_rejects_a_tampered_bundle() {
    let text = std::fs::read_to_string(shipped("t-gadget-")).unwrap();
    let mut b: Value = serde_json::from_str(&text).unwrap();
    b["graph"] = Value::String(b["graph"].as_str().unwrap().replace("3 4\n", "").replacen("5 7", "5 6", 1));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tampered.json");
    std::fs::write(&p, serde_json::to_string(&b).unwrap()).unwrap();
    let r = run(&["certify", path(&p)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["verdict"], "fail");
    assert!(r.report["results"]["certificate"]["counterexample"].is_object());
}

#[test]
fn certify_rejects_a_contradictory_contract() {
    let text = std::fs::read_to_string(shipped("t-gadget-")).unwrap();
    let mut b: Value = serde_json::from_str(&text).unwrap();
    b["contract"]["white"] = b["contract"]["black"].clone();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("contradictory.json");
    std::fs::write(&p, serde_json::to_string(&b).unwrap()).unwrap();
    let r = run(&["certify", path(&p)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["verdict"], "fail");
}

#[test]
fn export_matches_the_shipped_directory() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&["export-gadgets", path(dir.path())]);
    assert_eq!(r.code, 0);
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        let shipped = gadget_dir().join(p.file_name().unwrap());
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&shipped).unwrap());
    }
}
