use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn coprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coprod")).args(args).output().expect("run coprod")
}

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name).display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn list_prints_every_family() {
    let out = coprod(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), coprod::gallery::FAMILIES.len());
    assert!(text.lines().any(|l| l == "sandwich:qn"));
}

#[test]
fn table_spec_file_is_analysed_exactly() {
    let out = coprod(&["--spec", &spec("k_z2.json"), "--format", "json", "--sections", "regularity,coassociativity,counit"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["version"], 1);
    assert_eq!(r["maps"]["T1"]["status"], "regular");
    assert_eq!(r["coassociativity"]["T1T2"]["status"], "holds");
    assert_eq!(r["counit"]["status"], "holds");
    assert_eq!(r["counit"]["homomorphism"]["status"], "holds");
    assert_eq!(r["dual"]["status"], "skipped: precondition");
}

#[test]
fn gallery_line_and_gallery_json_specs() {
    let out = coprod(&["--spec", &spec("ex3_24.spec"), "--depth", "3", "--format", "json", "--sections", "regularity"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["source"]["family"], "sandwich:ex3_24");
    assert_eq!(r["maps"]["T2"]["status"], "non-regular");
    let out = coprod(&["--spec", &spec("matrix.json"), "--depth", "3", "--format", "json", "--sections", "regularity,counit"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["counit"]["homomorphism"]["status"], "fails");
}

#[test]
fn t_is_substituted() {
    let out = coprod(&["--family", "sandwich:ex3_24", "--t", "2", "--depth", "3", "--format", "json", "--sections", "regularity"]);
    assert_eq!(out.status.code(), Some(0));
    let params = json(&out)["source"]["params"].to_string();
    assert!(params.contains("\"2\""), "{params}");
}

#[test]
fn unmet_expectation_exits_with_mismatch() {
    let out = coprod(&["--family", "sandwich:ex3_25", "--depth", "3", "--sections", "coassociativity"]);
    assert_eq!(out.status.code(), Some(i32::from(coprod::cli::EXIT_MISMATCH)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("involution"));
}

#[test]
fn bad_input_exits_with_input_error() {
    for args in [
        vec!["--family", "group:Q8"],
        vec!["--family", "matrix", "--depth", "0"],
        vec!["--family", "matrix", "--sections", "bogus"],
        vec!["--family", "sandwich:ex3_24", "--t", "x+"],
    ] {
        let out = coprod(&args);
        assert_eq!(out.status.code(), Some(i32::from(coprod::cli::EXIT_INPUT)), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let dir = std::env::temp_dir().join(format!("coprod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"algebra\": {\"dimension\": 2, \"structure_constants\": [[0,0,1,\"1\"]]},\n  \"delta\": []\n}\n").unwrap();
    let out = coprod(&["--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(i32::from(coprod::cli::EXIT_INPUT)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gate"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_and_json_agree_on_statuses() {
    let base = ["--family", "group:S3", "--depth", "3", "--sections", "regularity"];
    let text = String::from_utf8(coprod(&base).stdout).unwrap();
    let j = json(&coprod(&[&base[..], &["--format", "json"]].concat()));
    for m in ["T1", "T2", "T3", "T4"] {
        let line = text.lines().find(|l| l.starts_with(&format!("maps.{m}:"))).unwrap();
        assert!(line.contains(j["maps"][m]["status"].as_str().unwrap()), "{line}");
    }
}
