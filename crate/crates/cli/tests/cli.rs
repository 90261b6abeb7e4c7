use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn oodn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oodn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn figures() -> String {
    fixture("figures.oodn.json").display().to_string()
}

fn polygons() -> String {
    fixture("polygons.oodn.json").display().to_string()
}

#[test]
fn intersection_lists_the_shared_core() {
    let o = oodn(&["op", &figures(), "intersection", "T(A)", "T(B)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for m in ["p1 =", "p2 =", "p3 =", "p4 =", "f1() ="] {
        assert!(text.contains(m), "{m} missing:\n{text}");
    }
    assert!(!text.contains("p5") && !text.contains("f2") && !text.contains("projection"));
}

#[test]
fn self_difference_does_not_exist() {
    let o = oodn(&["op", &figures(), "difference", "T(A)", "T(A)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("does not exist"));

    let o = oodn(&["--json", "op", &figures(), "difference", "T(A)", "T(A)"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exists"], false);
}

#[test]
fn infer_prints_five_relations() {
    let o = oodn(&["infer", &polygons(), "--threshold", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let edges: Vec<&str> = text.lines().filter(|l| l.contains("-[")).collect();
    assert_eq!(edges.len(), 5, "{text}");
    assert!(edges.contains(&"T(S) -[a-kind-of]-> T(R)"));
    assert!(!text.contains("instance-of]-> T(P)"));
}

#[test]
fn usage_and_load_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["op", "/no/such/file.oodn.json", "union", "A", "B"],
        vec!["op", "FIG", "merge", "T(A)", "T(B)"],
        vec!["op", "FIG", "union", "T(Z)", "T(A)"],
        vec!["op", "FIG", "intersection", "T(A)", "T(B)", "T(C)"],
        vec!["modify", "FIG", "nope", "T(A)"],
    ] {
        let f = figures();
        let args: Vec<&str> = args.into_iter().map(|a| if a == "FIG" { f.as_str() } else { a }).collect();
        let o = oodn(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn malformed_document_reports_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.oodn.json");
    std::fs::write(&bad, r#"{"version": 1, "classes": [{"name": "X", "properties": [{"name": 3}]}]}"#).unwrap();
    let o = oodn(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("classes[0].properties[0].name"), "{}", stderr(&o));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["show", "P"],
        vec!["infer", "P"],
        vec!["--json", "infer", "P"],
        vec!["op", "F", "union", "T(A)", "T(B)", "T(C)"],
        vec!["--json", "op", "F", "union", "A", "B", "C"],
        vec!["modify", "P", "M2(T(R))", "T(R)"],
        vec!["export-dot", "P"],
    ] {
        let (f, p) = (figures(), polygons());
        let args: Vec<&str> = args
            .into_iter()
            .map(|a| match a {
                "F" => f.as_str(),
                "P" => p.as_str(),
                a => a,
            })
            .collect();
        let first = oodn(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", stderr(&first));
        assert_eq!(first.stdout, oodn(&args).stdout, "{args:?}");
    }
}

#[test]
fn out_writes_a_loadable_network() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("next.oodn.json");
    let out = path.to_str().unwrap();
    let o = oodn(&["op", &figures(), "clone", "A", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Clone_1(A)"));
    let o = oodn(&["show", out, "Clone_1(A)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // chaining through the written file
    let o = oodn(&["op", out, "clone", "A", "--out", out]);
    assert!(stdout(&o).contains("Clone_2(A)"));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "no temporary files left behind");
}

#[test]
fn absent_result_leaves_out_file_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.oodn.json");
    let o = oodn(&["op", &figures(), "difference", "T(A)", "T(A)", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!path.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unwritable_out_fails_without_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing-dir").join("x.oodn.json");
    let o = oodn(&["infer", &polygons(), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn modify_reports_kinds() {
    let o = oodn(&["modify", &polygons(), "M1(T(S))", "T(S)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("kind: {partial, destroying}"), "{text}");
    assert!(text.starts_with("M1(T(S)): T(S) -> T(R)\n"), "{text}");

    let o = oodn(&["--json", "modify", &polygons(), "M1(T(R))", "T(R)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kinds"], serde_json::json!(["partial"]));
    assert_eq!(v["result"]["name"], "T(L_1)");
    assert_eq!(v["new_node"], true);
}

#[test]
fn no_dedup_adds_a_fresh_node() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.oodn.json");
    let out = path.to_str().unwrap();
    let o = oodn(&["modify", &polygons(), "M1(T(S))", "T(S)", "--out", out]);
    assert!(stdout(&o).contains("-> T(R)\n"));
    let o = oodn(&["modify", &polygons(), "M1(T(S))", "T(S)", "--no-dedup", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("-> T(R)\n"), "{}", stdout(&o));
    let o = oodn(&["--json", "validate", out]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["classes"], 4);
}

#[test]
fn queries() {
    let lines = |args: &[&str]| -> Vec<String> {
        let o = oodn(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        stdout(&o).lines().map(String::from).collect()
    };
    let p = polygons();
    assert_eq!(lines(&["query", &p, "--threshold", "1", "subclasses-of", "T(P)"]), ["T(R)", "T(S)"]);
    assert_eq!(lines(&["query", &p, "--threshold", "1", "instances-of", "T(S)"]), ["S_1"]);
    assert_eq!(lines(&["query", &p, "--threshold", "1", "reachable", "T(S)", "--kind", "is-a"]), ["T(P)", "T(R)"]);
    assert_eq!(lines(&["query", &p, "--threshold", "1", "neighbors", "T(R)", "--direction", "in"]), ["R_1", "T(S)"]);
    assert!(lines(&["query", &p, "subclasses-of", "T(P)"]).is_empty());
}

#[test]
fn export_dot_draws_absent_attempts() {
    let o = oodn(&["export-dot", &figures(), "--attempt", "difference T(A) T(A)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("digraph oodn {\n"));
    assert!(text.contains("style=dashed"));
    assert!(text.contains("does not exist"));
}
