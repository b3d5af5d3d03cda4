use std::path::Path;
use std::process::{Command, Output};

fn galois(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galois"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_cyclic_quintic() {
    let o = galois(&["classify", "--degree", "5", "--coeffs", "-1,1,4,-3,-3,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group_name"], "C5");
    assert_eq!(v["invariants"], serde_json::json!([4235, 4026275, -16076916075i64]));
}

#[test]
fn classify_reducible_cubic() {
    let o = galois(&["classify", "--degree", "3", "--coeffs", "1,0,0,-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("reducible"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(galois(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        galois(&["classify", "--degree", "7", "--coeffs", "1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        galois(&["classify", "--degree", "3", "--coeffs", "1,2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        galois(&["summarize", "--in", "/nonexistent/x.jsonl"]).status.code(),
        Some(2)
    );
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["classify", "generate", "summarize", "train", "evaluate", "verify"] {
        let o = galois(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
    assert_eq!(galois(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_cyclic_cubics() {
    let o = galois(&["verify", "--suite", "cubic-c3-h5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("C3 records (found 40, expected 40)"));
}

#[test]
fn verify_unknown_suite() {
    assert_eq!(galois(&["verify", "--suite", "nothing"]).status.code(), Some(1));
}

fn generate(dir: &Path, name: &str, workers: &str) -> Vec<u8> {
    let out = dir.join(name);
    let o = galois(&[
        "generate",
        "--degree",
        "4",
        "--height",
        "2",
        "--workers",
        workers,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::read(out).unwrap()
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a.jsonl", "1");
    let b = generate(dir.path(), "b.jsonl", "1");
    let c = generate(dir.path(), "c.jsonl", "3");
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let sa = std::fs::read(dir.path().join("a.summary.json")).unwrap();
    let sc = std::fs::read(dir.path().join("c.summary.json")).unwrap();
    assert_eq!(sa, sc);
}

#[test]
fn data_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_galois"))
        .args(["generate", "--degree", "3", "--height", "1"])
        .env("GALOIS_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("deg3_h1.jsonl").is_file());
}

#[test]
fn train_evaluate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("q.jsonl");
    let o = galois(&[
        "generate",
        "--degree",
        "5",
        "--height",
        "2",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut models = Vec::new();
    for name in ["m1.json", "m2.json"] {
        let m = dir.path().join(name);
        let o = galois(&[
            "train",
            "--in",
            data.to_str().unwrap(),
            "--out",
            m.to_str().unwrap(),
            "--epochs",
            "5",
            "--seed",
            "42",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        models.push(std::fs::read(&m).unwrap());
    }
    assert_eq!(models[0], models[1]);
    let report = dir.path().join("e.json");
    let o = galois(&[
        "evaluate",
        "--in",
        data.to_str().unwrap(),
        "--model",
        dir.path().join("m1.json").to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("hybrid"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(v["hybrid"]["accuracy"].as_f64().unwrap() >= v["network"]["accuracy"].as_f64().unwrap());
}

#[test]
fn summarize_reports_groups() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("c.jsonl");
    galois(&[
        "generate",
        "--degree",
        "3",
        "--height",
        "3",
        "--out",
        data.to_str().unwrap(),
    ]);
    let o = galois(&["summarize", "--in", data.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["group_counts"]["C3"].as_u64().unwrap() > 0);
}
