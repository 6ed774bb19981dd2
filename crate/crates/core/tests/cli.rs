use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str], fixtures: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omegader"))
        .args(args)
        .arg("--fixtures")
        .arg(fixtures)
        .output()
        .expect("binary runs")
}

fn repo_fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn tables_match_golden_files() {
    let empty = tempfile::tempdir().unwrap();
    for (which, file) in [("1", "table1.txt"), ("2", "table2.txt")] {
        let o = run(&["table", which], empty.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), golden(file), "table {which}");
    }
}

#[test]
fn validate_rejects_non_skew_omega() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "basis": ["x", "y"], "brackets": [], "omega": [{"i": 0, "j": 1, "val": "1"}, {"i": 1, "j": 0, "val": "1"}]}"#,
    )
    .unwrap();
    let o = run(&["validate", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o) + &stderr(&o);
    assert!(text.contains("pair (x, y)"), "{text}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"basis\": [\"x\",, \"y\"]\n}\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn missing_fixture_exits_3() {
    let empty = tempfile::tempdir().unwrap();
    for name in ["B", "A_alpha", "C_alpha"] {
        let o = run(&["dims", name], empty.path());
        assert_eq!(o.status.code(), Some(3), "{name}");
        assert!(stderr(&o).contains("missing fixture"), "{}", stderr(&o));
    }
}

#[test]
fn space_json_round_trips() {
    let o = run(&["space", "L1", "--kind", "gder_c", "--json"], &repo_fixtures());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "gder_c");
    assert_eq!(v["dim"], 5);
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn dims_for_l2() {
    let o = run(&["dims", "L2"], &repo_fixtures());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["gder     7", "gder_c   5", "qder     7", "cent_c   0"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn fixture_parameter_is_applied() {
    let o = run(&["dims", "A_alpha", "--param", "alpha=1/2"], &repo_fixtures());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("gder     9"));
}

#[test]
fn verify_builtin_passes() {
    let o = run(&["verify", "L1"], &repo_fixtures());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
