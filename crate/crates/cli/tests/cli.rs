use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gcores(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcores"))
        .args(args)
        .env_remove("GCORES_FULL_STRETCH")
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_json_matches_golden_modulo_timing() {
    let out = gcores(&["verify", "--scenario", &scenario("c2-m2-gf2-rescores.json"), "--report", "json", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let mut report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for s in report["suites"].as_array_mut().unwrap() {
        s["elapsed_ms"] = 0.into();
    }
    let golden: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scenario("golden/c2-m2-gf2-rescores.report.json")).unwrap())
            .unwrap();
    assert_eq!(report, golden);
}

#[test]
fn verify_human_with_suite_filter() {
    let out = gcores(&[
        "verify",
        "--scenario",
        &scenario("c2-m2-gf4-frobenius.json"),
        "--suite",
        "goldman",
        "--suite",
        "trace-equivariance",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  trace-equivariance"));
    assert!(text.contains("PASS  goldman"));
    assert!(text.contains("2/2 suites passed"));
}

#[test]
fn exit_codes_partition_failures() {
    let code = |args: &[&str]| gcores(args).status.code();
    assert_eq!(code(&["verify", "--scenario", &scenario("invalid/malformed.json")]), Some(3));
    assert_eq!(code(&["verify", "--scenario", &scenario("invalid/subgroup-outside-group.json")]), Some(4));
    assert_eq!(code(&["verify", "--scenario", &scenario("invalid/unknown-preset.json")]), Some(4));
    assert_eq!(code(&["verify", "--scenario", &scenario("invalid/rank-limit.json")]), Some(5));
    assert_eq!(code(&["verify", "--scenario", &scenario("c2-m2-gf2-rescores.json"), "--max-rank", "8"]), Some(5));
    assert_eq!(code(&["verify", "--scenario", &scenario("does-not-exist.json")]), Some(3));
}

#[test]
fn verification_failure_exits_with_two() {
    let dir = std::env::temp_dir().join(format!("gcores-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fail.json");
    std::fs::write(
        &path,
        r#"{"name": "fail", "group": {"preset": "C2"},
            "ring": {"carrier": {"galois_field": {"p": 2, "k": 1}}},
            "algebra": {"matrix": 1}, "suites": ["tensor-induction-nonadditive"]}"#,
    )
    .unwrap();
    let out = gcores(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("counterexample"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = gcores(&["verify", "--scenario", &scenario("c2-m2-gf2-rescores.json"), "--suite", "nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown suite"));
}

#[test]
fn presets_and_schema() {
    let presets = String::from_utf8(gcores(&["presets"]).stdout).unwrap();
    assert!(presets.contains("S4") && presets.contains("rescores"));
    let schema = gcores(&["schema"]);
    assert!(schema.status.success());
    let v: serde_json::Value = serde_json::from_slice(&schema.stdout).unwrap();
    assert_eq!(v["title"], "gcores scenario");
}
