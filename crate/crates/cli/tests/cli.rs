use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linkproj"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn scene(name: &str) -> String {
    scenes_dir().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn hopf_all_methods_pass() {
    let o = run(&["lk", &scene("hopf_r3.json"), "--pair", "g1,g2", "--method", "all", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = &json_lines(&o)[0];
    assert_eq!(report["verdict"], "PASS");
    let methods = report["pairs"][0]["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 4);
    for m in methods {
        assert_eq!(m["status"], "ok", "{m}");
        assert_eq!(m["rounded"].as_i64().unwrap().abs(), 1);
    }
}

#[test]
fn unlink_gauss_is_zero() {
    let o = run(&["lk", &scene("unlink_r3.json"), "--method", "gauss", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let m = &json_lines(&o)[0]["pairs"][0]["methods"][0];
    assert_eq!(m["rounded"], 0);
    assert!(m["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn malformed_scene_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"ambient_dim\": 3,\n  \"objects\": [\n    { \"name\": \"g1\" \"kind\": \"builtin\" }\n  ]\n}\n").unwrap();
    let o = run(&["lk", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    std::fs::write(
        &path,
        r#"{"ambient_dim": 3, "objects": [], "colour": "red"}"#,
    )
    .unwrap();
    let o = run(&["lk", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn builtin_suite_verifies() {
    let o = run(&["verify", &scene("suite.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("suite PASS (5 scenes)"));
}

#[test]
fn wrong_expectation_names_the_pair() {
    let text = std::fs::read_to_string(scene("hopf_r3.json"))
        .unwrap()
        .replace("\"value\": -1", "\"value\": 3");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.json");
    std::fs::write(&path, text).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("(g1, g2): expected 3, methods give -1"), "{}", stdout(&o));
}

#[test]
fn four_space_skips_gauss() {
    let o = run(&["verify", &scene("spun_pair_r4.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let methods = json_lines(&o)[0]["pairs"][0]["methods"].clone();
    let by_name = |n: &str| methods.as_array().unwrap().iter().find(|m| m["method"] == n).unwrap().clone();
    assert_eq!(by_name("gauss")["status"], "not_applicable");
    assert_eq!(by_name("gauss")["detail"], "not applicable (d=4)");
    assert_eq!(by_name("degree")["rounded"], -1);
    assert_eq!(by_name("reduce")["rounded"], -1);

    let o = run(&["lk", &scene("spun_pair_r4.json"), "--method", "gauss"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not applicable (d=4)"));
}

#[test]
fn input_errors_exit_with_one() {
    let hopf = scene("hopf_r3.json");
    for args in [
        vec!["lk", hopf.as_str(), "--pair", "g1,g9"],
        vec!["lk", hopf.as_str(), "--pair", "g1"],
        vec!["lk", hopf.as_str(), "--tol", "0"],
        vec!["lk", "/nonexistent/scene.json"],
        vec!["lk", "builtin:trefoil"],
        vec!["convergence", hopf.as_str(), "--schedule", ""],
        vec!["convergence", hopf.as_str(), "--schedule", "64..32"],
        vec!["gamma", "--a", "0"],
        vec!["gamma", "--a", "-1"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn convergence_csv_header_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hopf.csv");
    let o = run(&[
        "convergence",
        "builtin:hopf_r3",
        "--method",
        "gauss",
        "--schedule",
        "16..256",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nodes,value,abs_error_vs_final,wall_ms"));
    assert_eq!(lines.count(), 5);
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 6);
    for (row, n) in rows.iter().zip([16u64, 32, 64, 128, 256]) {
        assert_eq!(row["nodes"].as_u64(), Some(n));
        assert_eq!(row["evaluations"].as_u64(), Some(n * n));
        assert!(row.get("wall_ms").is_none());
    }
    assert!(rows[4]["abs_error_vs_final"].as_f64().unwrap() < 1e-8);
}

#[test]
fn gamma_table_contains_two() {
    let o = run(&["gamma", "--p", "1..6", "--a", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1]["p"], 2);
    assert_eq!(rows[1]["rhs"].as_f64(), Some(2.0));
    for r in &rows {
        assert!(r["abs_diff"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn machine_output_is_deterministic() {
    let args = ["lk", "builtin:torus_link_r3:3,6", "--json"];
    let outputs: Vec<Vec<u8>> = ["1", "4", "1"]
        .iter()
        .map(|w| {
            let o = bin().args(args).env("LK_WORKERS", w).output().unwrap();
            assert_eq!(o.status.code(), Some(0));
            o.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);

    let o = bin().args(args).env("LK_WORKERS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scene_export_round_trips() {
    let o = run(&["scene", "random_planar", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = run(&["lk", path.to_str().unwrap(), "--method", "all", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json_lines(&o)[0]["scene"], "random_planar_3");
}
