//! Integration tests for the command-line interface: documented output on
//! stdout, diagnostics on stderr, scriptable exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clott"))
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn check_accepts_zeros_with_exit_zero() {
    let out = bin().args(["check", &fixture("zeros.clott")]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

#[test]
fn check_rejects_double_tick_with_exit_one_and_rule_json() {
    let out = bin()
        .args(["check", &fixture("double_tick_rejected.clott"), "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["rule"], "tick-app");
}

#[test]
fn check_explain_prints_a_derivation_tree() {
    let out = bin().args(["check", &fixture("head.clott"), "--explain"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("clock-app"), "derivation should name the clock rule: {text}");
    assert!(text.contains("fst"));
}

#[test]
fn eval_zeros_matches_the_documented_value() {
    let out = bin()
        .args([
            "eval",
            &fixture("zeros.clott"),
            "--world",
            r#"{"clocks":{"l0":2},"valuation":{"k":"l0"}}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"[0,[0,[0,"*"]]]"#);
}

#[test]
fn eval_delayed_at_zero_budget_is_a_point() {
    let out = bin()
        .args([
            "eval",
            &fixture("zeros_delayed.clott"),
            "--world",
            r#"{"clocks":{"l0":0},"valuation":{"k":"l0"}}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#""*""#);
}

#[test]
fn eval_open_context_takes_an_environment() {
    let out = bin()
        .args([
            "eval",
            &fixture("open_judgement.clott"),
            "--world",
            r#"{"clocks":{"l0":1},"valuation":{"k":"l0"}}"#,
            "--env",
            r#"[["*",2],1]"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // pair x z with x = 2, z = 1 (a delayed number at budget one)
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[2,1]");
}

#[test]
fn normalize_unfolds_the_outer_redex_only() {
    let out = bin().args(["normalize", &fixture("zeros.clott")]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("pair 0 (dfix k"), "got {text}");
}

#[test]
fn verify_single_suite_emits_the_report_schema() {
    let out = bin()
        .args(["verify", "--suite", "streams", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let suite = &v[0];
    assert_eq!(suite["suite"], "streams");
    let checks = suite["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["lemma"].is_string());
        assert!(c["fixture"].is_string());
        assert!(c["world"].is_string());
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn trunc_environment_override_shrinks_the_world_count() {
    let small = bin()
        .args(["worlds", "--clocks", "k"])
        .env("CLOTT_TRUNC", "1,1")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&small.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let first = &v[0];
    assert_eq!(first["valuation"]["k"], "l0");
}

#[test]
fn usage_errors_exit_with_two() {
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_tail_of_zeros_through_the_cli_files() {
    // tl(zeros) applied through the semantics: head of the result is 0
    let dir = tempfile_dir();
    let src = "clocks k;\nctx;\n\
        (lam (s : Forall k2 Str[k2]) clam k3 adv (snd (s [k4])) k4 k3) \
        (clam kz ((lam (x : Later (a:kz) Str[kz]) pair 0 x) (dfix kz (lam (x : Later (a:kz) Str[kz]) pair 0 x)))) \
        : Forall k3 Str[k3]";
    let path = dir.join("tail_zeros.clott");
    std::fs::write(&path, src).unwrap();
    let out = bin()
        .args([
            "eval",
            path.to_str().unwrap(),
            "--world",
            r#"{"clocks":{"l0":1},"valuation":{"k":"l0"}}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    // component 0 of the tail family is the length-one tuple (0, *)
    assert_eq!(v["omega"]["0"], serde_json::json!([0, "*"]));
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("clott-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_handles_equality_and_type_judgements() {
    let out = bin().args(["check", &fixture("unfold_equality.clott")]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = bin().args(["check", &fixture("stream_type.clott")]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
