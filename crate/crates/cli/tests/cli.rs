use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn example() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/example1.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_passalloc")).args(args).env_remove("PASSALLOC_SEED").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)))
}

#[test]
fn allocate_prints_the_table() {
    let out = run(&["allocate", "--rule", "ee", example().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows[2].starts_with("1 ") && rows[2].ends_with(" 5"), "{text}");
    assert!(rows[3].ends_with(" 8"), "{text}");
    assert!(rows[4].ends_with(" 12"), "{text}");
    assert!(rows[5].starts_with("total") && rows[5].ends_with(" 25"), "{text}");
}

#[test]
fn allocate_json_has_exact_payouts() {
    let file = example();
    for (rule, want) in [
        ("ee", ["5", "8", "12"]),
        ("pp", ["21/5", "42/5", "62/5"]),
        ("pe", ["24/5", "39/5", "62/5"]),
        ("ep", ["13/3", "26/3", "12"]),
    ] {
        let v = json(&["allocate", "--rule", rule, file.to_str().unwrap()]);
        assert_eq!(v["header"]["tool"], "passalloc");
        assert_eq!(v["header"]["rule"], rule);
        assert_eq!(v["body"]["payouts"], serde_json::json!(want));
        assert_eq!(v["body"]["total"], "25");
    }
}

#[test]
fn validate_reports_duplicate_holders() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dup.json");
    let text = fs::read_to_string(example()).unwrap().replace("\"holders\": [4]", "\"holders\": [5]");
    fs::write(&path, text).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("holder sets must be disjoint"));

    let ok = run(&["validate", example().to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("float.json");
    fs::write(&path, r#"{"museums": 1, "consortia": [[1]], "passes": [{"sigma": 0, "price": 1.5}]}"#).unwrap();
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["allocate", "--rule", "zz", example().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["allocate", "--rule", "ee", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn owen_agrees_with_ee_on_the_example() {
    let out = run(&["owen", example().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: EQUAL"));
}

#[test]
fn audit_of_pp_is_clean() {
    let out = run(&["audit", "--rule", "pp", "--axioms", "all", "--instances", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: all checks passed"));
}

#[test]
fn audit_reports_failures_with_exit_one() {
    let out = run(&["audit", "--rule", "r2", "--axioms", "dummy", "--instances", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result: FAILURES"));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = stdout(&run(&["gen", "--seed", "42", "--museums", "2..8"]));
    let b = stdout(&run(&["gen", "--seed", "42", "--museums", "2..8"]));
    assert_eq!(a, b);
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.json");
    let out = run(&["gen", "--seed", "42", "--museums", "2..8", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap().trim_end(), a.trim_end());
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn seed_can_come_from_the_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_passalloc"))
        .args(["gen"])
        .env("PASSALLOC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout(&with_env), stdout(&run(&["gen", "--seed", "9"])));
}

#[test]
fn museum_split_keeps_revenue() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("split.json");
    let out = run(&[
        "transform",
        example().to_str().unwrap(),
        "--split-museum",
        "3",
        "--prices",
        "1,2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&["allocate", "--rule", "pp", path.to_str().unwrap()]);
    assert_eq!(v["body"]["payouts"].as_array().unwrap().len(), 4);
    assert_eq!(v["body"]["total"], "25");
    assert_eq!(v["body"]["payouts"][0], "21/5");
    assert_eq!(v["body"]["payouts"][1], "42/5");
}

#[test]
fn independence_witnesses_replay() {
    let dir = TempDir::new().unwrap();
    let out = run(&["independence", "--theorem", "2", "--confirm", "0", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let mut files: Vec<PathBuf> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 4);
    for file in files {
        let out = run(&["replay", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{}", file.display());
        assert!(stdout(&out).contains("violation reproduced"));
    }
}

#[test]
fn json_output_is_stable() {
    let file = example();
    let a = stdout(&run(&["--format", "json", "owen", file.to_str().unwrap()]));
    let b = stdout(&run(&["--format", "json", "owen", file.to_str().unwrap()]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["header"]["command"], "owen");
}
