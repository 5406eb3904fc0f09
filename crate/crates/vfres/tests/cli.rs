use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vfres"))
}

fn path(rel: &str) -> String {
    format!("{}/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_json() {
    let o = run(&["--format", "json", "analyze", &path("fixtures/vf-a.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invariant"]["virtual_height"], 3);
    assert_eq!(v["invariant"]["inv1"], serde_json::json!([3, 0, 4]));
}

#[test]
fn analyze_text() {
    let o = run(&["analyze", &path("fixtures/vf-b.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2, 1, 2"), "{}", stdout(&o));
}

#[test]
fn bad_input_exit_code() {
    let f = tmp("negative.json");
    std::fs::write(&f, r#"{"vector_field": {"dy": [[0, -1, 0, 1]]}}"#).unwrap();
    let o = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("negative exponent"));
    let o = run(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn blowup_emits_child() {
    let out = tmp("vf-b-child.json");
    let o = run(&["blowup", &path("fixtures/vf-b.json"), "--dir", "x", "--force-weight", "1,2,1", "--emit", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = vfres::input::parse_input(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let want = vfres_core::PolyVectorField::from_terms(
        [(1, [0, 2, 0], 1), (1, [0, 0, 3], 1), (2, [0, 0, 3], 1)].map(|(i, e, c)| (i, e, vfres_core::rat::q(c))),
    );
    assert_eq!(doc.field().unwrap(), want);
}

#[test]
fn resolve_and_verify() {
    let tree = tmp("vf-a-tree.json");
    let o = run(&["resolve", &path("fixtures/vf-a.json"), "--tree", tree.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", tree.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&tree).unwrap()).unwrap();
    let nodes = v["nodes"].as_array_mut().unwrap();
    let idx = nodes.iter().position(|n| !n["parent"].is_null() && !n["invariant"].is_null()).unwrap();
    nodes[idx]["invariant"]["inv"] = serde_json::json!([99, 0, 0, 0, 0, 0]);
    let bad = tmp("vf-a-tampered.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn forced_homogeneous_run_fails_certificate() {
    let o = run(&["resolve", &path("fixtures/self-similar.json"), "--force-weight", "1,1,1"]);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
}

#[test]
fn depth_cap_reports_unresolved() {
    let o = run(&["resolve", &path("fixtures/vf-a.json"), "--max-depth", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn badtree_command() {
    let o = run(&["--format", "json", "badtree", &path("strata/03-chain-three.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mult"]["length"], 2);
    assert_eq!(v["matches_expectation"], true);
}

#[test]
fn export_off() {
    let off = tmp("vf-a.off");
    let o = run(&["export", &path("fixtures/vf-a.json"), "--off", off.to_str().unwrap(), "--derived-at", "7/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&off).unwrap();
    assert!(text.starts_with("OFF\n"));
}
