use std::process::{Command, Output};

fn gkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn star_condition() {
    let o = gkm(&["star-condition", "--h", "2,3,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    assert_eq!(stdout(&gkm(&["star-condition", "--h", "3,3,4,4"])), "false\n");
}

#[test]
fn betti() {
    let o = gkm(&["cohomology", "betti", "--h", "3,3,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[1,2,2,1]\n");
}

#[test]
fn automorphism_count() {
    let o = gkm(&["aut", "enumerate", "--h", "3,3,4,4", "--count-only"]);
    assert_eq!(stdout(&o), "24\n");
}

#[test]
fn automorphism_json() {
    let o = gkm(&["aut", "enumerate", "--h", "2,3,3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 12);
    assert_eq!(list[0]["vertex_map"]["123"], "123");
    assert_eq!(list[0]["lattice_map"], serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
}

#[test]
fn aut_star_full_flag() {
    let o = gkm(&["aut", "star", "--h", "3,3,3", "--max-degree", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn build_then_validate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let o = gkm(&["graph", "build", "--h", "2,3,4,4", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let o = gkm(&["graph", "validate", "--in", p]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let text = std::fs::read_to_string(&path).unwrap();
    let again = stdout(&gkm(&["graph", "build", "--h", "2,3,4,4"]));
    assert_eq!(text, again);
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let bad = r#"{"n_vars": 3, "vertices": ["a", "b", "c"],
        "edges": [{"src": "a", "dst": "b", "label": ["1", "-1", "0"]},
                  {"src": "a", "dst": "c", "label": ["2", "-2", "0"]}]}"#;
    std::fs::write(&path, bad).unwrap();
    let o = gkm(&["graph", "validate", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pairwise_independent"));
}

#[test]
fn dot_output() {
    let o = gkm(&["graph", "build", "--h", "2,3,3", "--format", "dot"]);
    let s = stdout(&o);
    assert!(s.starts_with("graph G {\n"));
    assert!(s.contains("\"123\" -- \"213\" [label=\"-t1 + t2\"];"));
}

#[test]
fn equivariant_basis_output() {
    let o = gkm(&["cohomology", "equivariant", "--h", "2,3,3", "--degree", "2", "--lattice", "t"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["basis"].as_array().unwrap().len(), 6);
    let o = gkm(&["cohomology", "equivariant", "--h", "2,3,3", "--degree", "3", "--lattice", "that"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 0);
}

#[test]
fn unipotent_sweep() {
    let o = gkm(&["unipotent", "sweep", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let certs = v.as_array().unwrap();
    // four non-full h, six ordered pairs each
    assert_eq!(certs.len(), 24);
    assert!(certs.iter().all(|c| c["witness"].is_string()));
    assert!(certs.iter().any(|c| c["h"] == serde_json::json!([2, 3, 3]) && c["i"] == 2 && c["j"] == 1));
}

#[test]
fn verify_small() {
    let o = gkm(&["verify", "all", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 9);
    assert!(s.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn output_is_deterministic() {
    let args = ["aut", "enumerate", "--h", "2,3,4,4"];
    let a = gkm(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_gkm")).args(args).env("GKM_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(gkm(&["star-condition", "--h", "3,2,3"]).status.code(), Some(2));
    assert_eq!(gkm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gkm(&["graph", "validate", "--in", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(gkm(&["cohomology", "betti", "--h", "6,6,6,6,6,6"]).status.code(), Some(2));
    assert_eq!(gkm(&["graph", "build", "--h", "7,7,7,7,7,7,7"]).status.code(), Some(2));
    assert_eq!(gkm(&["cohomology", "betti", "--h", "1,3,3"]).status.code(), Some(2));
}
