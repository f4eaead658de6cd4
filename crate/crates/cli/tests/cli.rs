use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn irrdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrdec"))
        .args(args)
        .env_remove("IRRDEC_EDGE_LIMIT")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn gen_file(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = irrdec(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn gen_writes_edge_lists() {
    let out = irrdec(&["gen", "cycle", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("5\n"));

    let out = irrdec(&["gen", "spider", "2", "--json"]);
    let v = json_of(&out);
    assert_eq!(
        (v["result"]["n"].as_u64(), v["result"]["m"].as_u64()),
        (Some(10), Some(9))
    );
}

#[test]
fn gen_is_deterministic_given_the_seed() {
    let a = json_of(&irrdec(&[
        "gen",
        "random_regular",
        "60",
        "12",
        "--seed",
        "7",
        "--json",
    ]));
    let b = json_of(&irrdec(&[
        "gen",
        "random_regular",
        "60",
        "12",
        "--seed",
        "7",
        "--json",
    ]));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(
        a["manifest"]["result_digest"],
        b["manifest"]["result_digest"]
    );
    let c = json_of(&irrdec(&[
        "gen",
        "random_regular",
        "60",
        "12",
        "--seed",
        "8",
        "--json",
    ]));
    assert_ne!(
        a["manifest"]["result_digest"],
        c["manifest"]["result_digest"]
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(
        irrdec(&["gen", "random_regular", "60", "12"]).status.code(),
        Some(64)
    );
    assert_eq!(irrdec(&["gen", "hypercube", "3"]).status.code(), Some(64));
    assert_eq!(irrdec(&["decompose", "missing.el"]).status.code(), Some(64));
    assert_eq!(
        irrdec(&["audit", "--claim", "nope"]).status.code(),
        Some(64)
    );
    assert_eq!(irrdec(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn malformed_input_exits_65() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.el");
    std::fs::write(&path, "2\n0 0\n").unwrap();
    let out = irrdec(&["oracle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-loop"));
}

#[test]
fn decompose_diagnostics() {
    let dir = TempDir::new().unwrap();
    let spider = gen_file(dir.path(), "spider.el", &["spider", "2"]);
    let out = irrdec(&[
        "decompose",
        spider.to_str().unwrap(),
        "--seed",
        "1",
        "--strict",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["result"]["diagnostic"]["diagnostic"], "MinDegreeTooSmall");
    assert_eq!(v["manifest"]["seed"], 1);

    let p3 = gen_file(dir.path(), "p3.el", &["path", "3"]);
    let v = json_of(&irrdec(&[
        "decompose",
        p3.to_str().unwrap(),
        "--seed",
        "1",
        "--json",
    ]));
    assert_eq!(
        v["result"]["diagnostic"]["diagnostic"],
        "ExceptionalComponent"
    );
    assert_eq!(v["result"]["diagnostic"]["class"], "OddPath");
}

#[test]
fn decompose_dense_graph_is_valid_or_staged() {
    let dir = TempDir::new().unwrap();
    let k60 = gen_file(dir.path(), "k60.el", &["complete", "60"]);
    let args = [
        "decompose",
        k60.to_str().unwrap(),
        "--seed",
        "3",
        "--slack",
        "3",
        "--json",
    ];
    let out = irrdec(&args);
    let v = json_of(&out);
    match v["result"]["status"].as_str().unwrap() {
        "ok" => {
            assert_eq!(out.status.code(), Some(0));
            assert_eq!(v["result"]["valid"], true);
        }
        "diagnostic" => {
            assert_eq!(out.status.code(), Some(2));
            assert!(v["result"]["stage"].is_string());
        }
        other => panic!("status {other}"),
    }
    let again = json_of(&irrdec(&args));
    assert_eq!(
        v["manifest"]["result_digest"],
        again["manifest"]["result_digest"]
    );
}

#[test]
fn decompose_star_success_is_checked() {
    let dir = TempDir::new().unwrap();
    let star = gen_file(dir.path(), "star.el", &["star", "12"]);
    let mut successes = 0;
    for seed in 0..20 {
        let seed = seed.to_string();
        let out = irrdec(&[
            "decompose",
            star.to_str().unwrap(),
            "--seed",
            &seed,
            "--json",
        ]);
        let v = json_of(&out);
        if v["result"]["status"] == "ok" {
            assert_eq!(v["result"]["valid"], true);
            assert_eq!(v["result"]["decomposition"]["k"], 3);
            successes += 1;
        }
    }
    assert!(successes > 0);
}

#[test]
fn oracle_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (vec!["path", "2"], Some(1)),
        (vec!["cycle", "4"], Some(2)),
        (vec!["spider", "2"], Some(3)),
        (vec!["path", "3"], None),
        (vec!["cycle", "3"], None),
    ];
    for (i, (args, expected)) in cases.iter().enumerate() {
        let path = gen_file(dir.path(), &format!("g{i}.el"), args);
        let out = irrdec(&["oracle", path.to_str().unwrap(), "--json"]);
        let v = json_of(&out);
        assert_eq!(
            v["result"]["k"].as_u64(),
            expected.map(|k| k as u64),
            "{args:?}"
        );
        assert_eq!(
            out.status.code(),
            Some(if expected.is_some() { 0 } else { 2 })
        );
        assert!(v["result"]["nodes_explored"].is_u64());
    }
}

#[test]
fn oracle_edge_limit_from_environment() {
    let dir = TempDir::new().unwrap();
    let k6 = gen_file(dir.path(), "k6.el", &["complete", "6"]);
    let out = Command::new(env!("CARGO_BIN_EXE_irrdec"))
        .args(["oracle", k6.to_str().unwrap()])
        .env("IRRDEC_EDGE_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit of 10"));
}

#[test]
fn audit_reports_every_claim() {
    let out = irrdec(&["audit", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["result"]["all_pass"], true);
    assert_eq!(v["result"]["claims"].as_array().unwrap().len(), 11);

    let v = json_of(&irrdec(&["audit", "--claim", "f10", "--json"]));
    let f10 = v["result"]["claims"][0]["computed"].as_f64().unwrap();
    assert!((f10 - 14.0).abs() < 0.5);
}

#[test]
fn riskprob_examples() {
    let v = json_of(&irrdec(&[
        "riskprob", "100", "100", "1", "--c1v", "0", "--json",
    ]));
    assert_eq!(v["result"]["probability"], "1/8");
    assert_eq!(v["result"]["bound"]["holds"], true);
    let v = json_of(&irrdec(&[
        "riskprob", "6", "7", "1", "--c1v", "3", "--json",
    ]));
    assert_eq!(v["result"]["probability"], "1/2");
    let out = irrdec(&["riskprob", "50", "50", "23", "--json"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["result"]["bound"]["holds"], true);
    assert_eq!(
        irrdec(&["riskprob", "1", "1000", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        irrdec(&["riskprob", "6", "7", "1", "--c1v", "99"])
            .status
            .code(),
        Some(64)
    );
}
