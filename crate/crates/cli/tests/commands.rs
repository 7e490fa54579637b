use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn run(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stardyn"));
    cmd.args(args).env_remove("STARDYN_DEPTH_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    let json = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (status.code().expect("exit code"), json, String::from_utf8_lossy(&stderr).into_owned())
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> (i32, Value, String) {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args, &[])
}

#[test]
fn classify_fixtures() {
    let (code, v, _) = run_on("classify", "S_shift3", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], true);
    assert_eq!(v["mono"], false);
    assert_eq!(v["witness_p"], serde_json::json!([[[[0, 1, 0, 1]]], [[[1, 1, 0, 1]]], [[[1, 1, 0, 1]]]]));
    assert_eq!(v["duality"].as_array().unwrap().len(), 5);

    let (code, v, _) = run_on("classify", "S_const3", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], false);

    let (_, v, _) = run_on("classify", "S_id", &[]);
    assert_eq!(v["auto"], true);

    let (code, v, _) = run_on("classify", "M2_plus_C", &[]);
    assert_eq!(code, 0);
    assert!(v.get("duality").is_none());
}

#[test]
fn extend_dimensions() {
    let dims = |name, levels: &str| run_on("extend", name, &["--levels", levels]).1["dims"].clone();
    assert_eq!(dims("S_merge", "5"), serde_json::json!([3, 4, 5, 6, 7, 8]));
    assert_eq!(dims("S_shift3", "5"), serde_json::json!([3, 3, 3, 3, 3, 3]));
    assert_eq!(dims("S_const3", "3"), serde_json::json!([3, 5, 7, 9]));
}

#[test]
fn extend_writes_bratteli_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tower.dot");
    let (code, v, _) = run_on("extend", "S_merge", &["--levels", "2", "--dot", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let dot = std::fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph"));
    for node in ["L0S0", "L1S0", "L1S1", "L2S2"] {
        assert!(dot.contains(node), "{node} missing");
    }
}

#[test]
fn spectrum_points() {
    let (code, v, _) = run_on("spectrum", "S_merge", &["--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 5);
    assert_eq!(v["points"][0], "(2)");
    assert_eq!(v["level_sizes"], v["level_dims"]);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.dot");
    let (code, _, _) = run_on("spectrum", "S_const3", &["--depth", "2", "--dot", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(out).unwrap().contains("->"));
}

#[test]
fn covrep_modes() {
    let (code, v, _) = run_on("covrep", "S_shift3", &["--depth", "4", "--mode", "example13"]);
    assert_eq!(code, 0);
    let rels = v["relations"].as_array().unwrap();
    let cr1pp = rels.iter().find(|r| r["relation"] == "CR1''").unwrap();
    assert_eq!(cr1pp["status"], "fail");
    assert_eq!(cr1pp["as_expected"], true);
    assert!(cr1pp["witnesses"].as_array().unwrap().iter().all(|w| w.as_str().unwrap().ends_with(",0)")));
    assert_eq!(v["structural"]["strict"], false);

    let (code, v, _) = run_on("covrep", "S_merge", &["--depth", "5"]);
    assert_eq!(code, 0);
    assert!(v["relations"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
    assert_eq!(v["structural"]["strict"], true);

    let (code, _, err) = run_on("covrep", "S_merge", &["--depth", "3", "--mode", "example13"]);
    assert_eq!(code, 2);
    assert!(err.contains("injective"));
}

#[test]
fn verify_all_passes_on_bundled_fixtures() {
    for name in ["S_id", "S_const3", "S_shift3", "S_merge", "M2_plus_C"] {
        let (code, v, err) = run_on("verify-all", name, &["--depth", "4"]);
        assert_eq!(code, 0, "{name}: {err} {v}");
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn input_errors_exit_with_2() {
    let (code, _, err) = run_on("spectrum", "M2_plus_C", &["--depth", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("partial-map"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    for text in [
        "not json",
        r#"{"kind":"partial_map","points":["a"],"domain":["b"],"map":{"b":"a"}}"#,
        r#"{"kind":"partial_map","points":["a"],"domain":[],"map":{"a":"a"}}"#,
        r#"{"kind":"multimatrix","blocks":[2],"endo":{"targets":[{"multiplicity":[0],"unitary":[[[1,1,0,1],[1,1,0,1]],[[0,1,0,1],[1,1,0,1]]]}]}}"#,
        r#"{"kind":"multimatrix","blocks":[2],"endo":{"targets":[{"multiplicity":[0],"padding":1}]}}"#,
        r#"{"kind":"multimatrix","blocks":[1],"endo":{"targets":[{"multiplicity":[0],"unitary":[[[1,0,0,1]]]}]}}"#,
    ] {
        std::fs::write(&bad, text).unwrap();
        let (code, _, err) = run(&["classify", bad.to_str().unwrap()], &[]);
        assert_eq!(code, 2, "{text}: {err}");
    }

    let (code, _, _) = run(&["classify", "/nonexistent/system.json"], &[]);
    assert_eq!(code, 2);
}

#[test]
fn depth_limit_is_enforced() {
    let path = fixture("S_const3");
    let p = path.to_str().unwrap();
    let (code, _, err) = run(&["spectrum", p, "--depth", "6"], &[("STARDYN_DEPTH_LIMIT", "5")]);
    assert_eq!(code, 2);
    assert!(err.contains("limit"));
    let (code, _, _) = run(&["spectrum", p, "--depth", "6"], &[("STARDYN_DEPTH_LIMIT", "100")]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["covrep", p, "--depth", "6"], &[("STARDYN_DEPTH_LIMIT", "3")]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["spectrum", p, "--depth", "1"], &[("STARDYN_DEPTH_LIMIT", "many")]);
    assert_eq!(code, 2);
}
