//! Exercises the binary end to end: exit codes, report shape, and the
//! separation of timing (stderr) from report content (stdout).

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_distlax")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .expect("fixtures directory")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn generator_validates_clean() {
    let out = run(&["validate", "rel(2)"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ok: true"), "{text}");
    assert!(
        !text.contains("elapsed"),
        "timing must stay off stdout: {text}"
    );
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("elapsed-ms:"), "{err}");
}

#[test]
fn json_report_parses() {
    let out = run(&["--json", "validate", "rel(2)"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON document");
    assert_eq!(value["ok"], serde_json::Value::Bool(true));
}

#[test]
fn corrupted_document_exits_one() {
    let path = fixtures().join("bad-interchange.dl");
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("interchange"), "{text}");
    assert!(text.contains("FAIL"), "{text}");
}

#[test]
fn unreadable_input_exits_two() {
    let out = run(&["validate", "no-such-document"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn malformed_document_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.dl");
    std::fs::write(&path, "kind: category\nlabel: broken\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn corrupt_tool_reports_the_change() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "law-d1.dl",
        "cat-arrow.dl",
        "cat-loop3.dl",
        "fun-collapse-arrow.dl",
        "fun-collapse-zmod3.dl",
    ] {
        std::fs::copy(fixtures().join(name), dir.path().join(name)).unwrap();
    }
    let out = Command::new(bin())
        .current_dir(dir.path())
        .args(["corrupt", "law-d1.dl", "--seed", "3", "-o", "law-d1-hit"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("corrupted"), "{text}");
    assert!(dir.path().join("law-d1-hit.dl").exists());
}
