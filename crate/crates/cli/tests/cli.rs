use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clique-census"))
        .args(args)
        .env_remove("CLIQUE_CENSUS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn count_path_power() {
    let out = run(&[
        "count",
        "--construct",
        "path_power:n=20,k=3",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "144\n");

    let out = run(&["count", "--construct", "path_power:n=20,k=3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["clique_count"], "144");
    assert_eq!(report["config"]["command"], "count");
    assert_eq!(report["config"]["construct"], "path_power:n=20,k=3");
}

#[test]
fn audit_path_power_holds() {
    let out = run(&["audit", "--construct", "path_power:n=20,k=3", "--t", "5"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&out);
    assert_eq!(report["report"]["all_hold"], true);
    let checks = report["report"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks
        .iter()
        .all(|c| c["holds"] == true && c["anchor"].is_string()));
    assert_eq!(report["config"]["t"], 5);
}

#[test]
fn audit_failure_exits_one() {
    let out = run(&["audit", "--construct", "complete:n=14", "--t", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["report"]["all_hold"], false);
    assert_eq!(
        report["report"]["hypothesis"]["status"],
        "contains_subdivision"
    );
}

#[test]
fn petersen_has_no_k5_subdivision() {
    let out = run(&[
        "check-subdivision",
        "--construct",
        "petersen",
        "--t",
        "5",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "none\n");

    let out = run(&["check-subdivision", "--construct", "petersen", "--t", "5"]);
    let report = json(&out);
    assert_eq!(report["result"], "none");
    assert!(report["witness"].is_null());
}

#[test]
fn petersen_has_k5_minor() {
    let out = run(&["check-minor", "--construct", "petersen", "--t", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"], "found");
    assert_eq!(
        report["witness"]["branch_sets"].as_array().unwrap().len(),
        5
    );
}

#[test]
fn subdivision_witness_json_shape() {
    let out = run(&[
        "check-subdivision",
        "--construct",
        "subdivided_complete:t=4",
        "--t",
        "4",
    ]);
    let report = json(&out);
    assert_eq!(report["result"], "found");
    assert_eq!(report["witness"]["branch"].as_array().unwrap().len(), 4);
    assert_eq!(report["witness"]["paths"].as_array().unwrap().len(), 6);
}

#[test]
fn census_and_enumerate() {
    let out = run(&["census", "--construct", "complete_multipartite:k=3"]);
    let report = json(&out);
    assert_eq!(report["census"], serde_json::json!(["1", "6", "12", "8"]));
    assert_eq!(report["total"], "27");

    let out = run(&[
        "enumerate",
        "--construct",
        "complete:n=2",
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&out), "\n0\n0 1\n1\n");
}

#[test]
fn generate_round_trips_through_input() {
    let dir = std::env::temp_dir().join(format!("clique-census-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pp.txt");
    let out = run(&[
        "generate",
        "--construct",
        "path_power:n=12,k=2",
        "--format",
        "text",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&out), "44\n");

    let col = dir.join("tri.col");
    std::fs::write(&col, "c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    let out = run(&[
        "count",
        "--input",
        col.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&out), "8\n");

    let spec = dir.join("spec.json");
    std::fs::write(
        &spec,
        r#"{"family": "random_gnp", "params": {"n": 9, "p": 0.5}, "seed": 3}"#,
    )
    .unwrap();
    let a = run(&["census", "--construct", spec.to_str().unwrap()]);
    let b = run(&["census", "--construct", spec.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = [
        "audit",
        "--construct",
        "random_gnp:n=12,p=0.3",
        "--seed",
        "7",
        "--t",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let threaded = Command::new(env!("CARGO_BIN_EXE_clique-census"))
        .args(args)
        .env("CLIQUE_CENSUS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(threaded.status.code(), a.status.code());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        run(&["count", "--construct", "bogus:n=3"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(
        run(&["audit", "--construct", "complete:n=3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["count", "--input", "/nonexistent/graph.txt"])
            .status
            .code(),
        Some(2)
    );
    let out = run(&["count", "--construct", "path_power:n=5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k"));
}

#[test]
fn limit_errors_exit_three() {
    let out = run(&[
        "check-subdivision",
        "--construct",
        "path_power:n=30,k=4",
        "--t",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "sparse-check",
        "--construct",
        "complete:n=30",
        "--beta",
        "1/2",
        "--big-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sparse_check_verdicts() {
    let out = run(&[
        "sparse-check",
        "--construct",
        "cycle:n=8",
        "--beta",
        "1/2",
        "--big-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["certificate"]["verdict"], "sparse");

    let out = run(&[
        "sparse-check",
        "--construct",
        "complete:n=6",
        "--beta",
        "1/2",
        "--big-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let cert = &json(&out)["certificate"];
    assert_eq!(cert["verdict"], "violated");
    assert_eq!(cert["beta"], "1/2");
    assert_eq!(cert["N"], 3);
}

#[test]
fn bounds_reports() {
    let out = run(&["bounds", "--alpha", "0.35", "--beta", "0.4", "--t", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let total = json(&out)["refined"]["total_exponent"].as_f64().unwrap();
    assert!(total < 20.0);

    let out = run(&["bounds", "--degenerate", "3,20", "--binom", "10,3"]);
    let report = json(&out);
    assert_eq!(report["degenerate"]["bound"], "144");
    assert_eq!(report["checks"][0]["lhs"], "176");

    let out = run(&["bounds", "--construct", "path_power:n=20,k=3"]);
    assert_eq!(json(&out)["graph"]["degenerate_bound"], "144");

    assert_eq!(run(&["bounds"]).status.code(), Some(2));
}
