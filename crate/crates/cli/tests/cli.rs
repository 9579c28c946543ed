use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multipoint")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("multipoint-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn fixture_round_trips_through_a_file() {
    let o = run(&["fixtures", "fold"]);
    assert!(o.status.success());
    let path = temp_file("fold.json", &stdout(&o));
    let v = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("valid: yes"));
}

#[test]
fn icss_json_has_page_entries() {
    let o = run(&["icss", "fixture:disc_to_rp2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["converges"], Value::Bool(true));
    let pages = v["pages"].as_array().unwrap();
    let e110 = pages.iter().find(|e| e["r"] == 1 && e["p"] == 1 && e["q"] == 0).unwrap();
    assert_eq!(e110["rank"], 0);
    assert_eq!(e110["torsion"], serde_json::json!([2]));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["gvzss", "fixture:figure_eight", "--format", "json"]);
    let b = run(&["gvzss", "fixture:figure_eight", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let r1 = run(&["fixtures", "random", "--seed", "9"]);
    let r2 = run(&["fixtures", "random", "--seed", "9"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn verify_passes_on_fixtures() {
    for name in ["identity", "fold", "double_cover", "figure_eight", "disc_to_rp2"] {
        let o = run(&["verify", &format!("fixture:{name}")]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn invalid_map_exits_with_one() {
    let doc = r#"{"x": {"vertices": ["a", "b"], "simplices": [["a", "b"]]},
                  "y": {"vertices": ["u", "v"], "simplices": [["u", "v"]]},
                  "map": {"a": "u", "b": "u"}}"#;
    let path = temp_file("collapse.json", doc);
    assert_eq!(run(&["validate", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_two() {
    let path = temp_file("bad.json", r#"{"x": {"vertices": ["a"], "simplices": [["q"]]}, "y": {"vertices": ["u"], "simplices": [["u"]]}, "map": {"a": "u"}}"#);
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'q'"));
    assert_eq!(run(&["icss", "fixture:nope"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "/nonexistent/map.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn build_lists_tuples() {
    let o = run(&["build", "fixture:double_cover", "--kind", "D", "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], serde_json::json!([["a", "b"], ["b", "a"]]));
}
