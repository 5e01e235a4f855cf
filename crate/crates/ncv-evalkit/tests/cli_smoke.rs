//! Black-box tests of the `ncv` binary: exit codes, artifact files, and
//! stdout shape, all against the scripted backend fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ncv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn eval_ncv_writes_artifacts_and_prints_metrics() {
    let out = TempDir::new().unwrap();
    let output = ncv(&[
        "eval",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--method", "ncv",
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    for file in ["results.jsonl", "metrics.json", "cost.json", "cost.csv"] {
        assert!(out.path().join(file).exists(), "missing {file}");
    }
    let text = stdout(&output);
    assert!(text.contains("gsm8k") && text.contains("math"), "stdout: {text}");
    assert!(text.contains("(overall)"));
    assert!(text.contains("ncv@3-binary-vote"));

    // gsm8k is perfect; math drops one fully-correct case (c6 is flagged).
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("metrics.json")).unwrap())
            .unwrap();
    let per_subset = metrics["per_subset"].as_array().unwrap();
    assert_eq!(per_subset[0]["subset"], "gsm8k");
    assert_eq!(per_subset[0]["f1"], 100.0);
    assert_eq!(per_subset[1]["subset"], "math");
    assert_eq!(per_subset[1]["correct_accuracy"], 50.0);
    assert_eq!(per_subset[1]["error_accuracy"], 100.0);
}

#[test]
fn baseline_greedy_scores_the_demo_perfectly() {
    let out = TempDir::new().unwrap();
    let output = ncv(&[
        "baseline",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("e2e-greedy"), "stdout: {text}");

    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("metrics.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["f1"], 100.0);
}

#[test]
fn verify_without_label_prints_only_the_index() {
    let output = ncv(&[
        "verify",
        "--input", fixture("verify_case.json").to_str().unwrap(),
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert_eq!(stdout(&output), "0\n");
}

#[test]
fn verify_with_label_prints_the_full_result() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("case.json");
    std::fs::write(
        &input,
        r#"{"id": "c2", "problem": "Tickets cost $6 each. What do 7 tickets cost?",
            "steps": ["One ticket costs 6 dollars.",
                      "Seven tickets cost 6 * 7 = 41 dollars.",
                      "The answer is 41 dollars."],
            "label": 1}"#,
    )
    .unwrap();

    let output = ncv(&[
        "verify",
        "--input", input.to_str().unwrap(),
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let result: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(result["predicted"], 2);
    assert_eq!(result["case_id"], "c2");
    assert_eq!(result["method_tag"], "ncv@3-binary-vote");
    assert!(result["trace"].as_array().unwrap().len() == 2);
    assert!(stderr(&output).contains("predicted=2 label=2"));
}

#[test]
fn decompose_writes_a_graph_per_case() {
    let out = TempDir::new().unwrap();
    let output = ncv(&[
        "decompose",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--decomposer", "identity",
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    let graphs = std::fs::read_to_string(out.path().join("graphs.jsonl")).unwrap();
    assert_eq!(graphs.lines().count(), 6);
    // 3+4+2+3+3+4 identity nodes across the six demo cases.
    assert!(stdout(&output).contains("6 cases, 19 nodes"));
}

#[test]
fn score_reproduces_eval_metrics_from_the_results_file() {
    let out = TempDir::new().unwrap();
    let eval_output = ncv(&[
        "eval",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--method", "ncv",
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
    ]);
    assert!(eval_output.status.success());

    let score_output = ncv(&[
        "score",
        "--results", out.path().join("results.jsonl").to_str().unwrap(),
    ]);
    assert!(score_output.status.success(), "stderr: {}", stderr(&score_output));
    // Metric and cost tables are identical to the eval run's stdout.
    assert_eq!(stdout(&score_output), stdout(&eval_output));
}

#[test]
fn unknown_flag_exits_2() {
    let output = ncv(&["eval", "--dataset", "x.jsonl", "--bogus-flag"]);
    assert_eq!(output.status.code(), Some(2), "stderr: {}", stderr(&output));
}

#[test]
fn missing_subcommand_exits_2() {
    let output = ncv(&[]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn missing_dataset_exits_4() {
    let out = TempDir::new().unwrap();
    let output = ncv(&[
        "eval",
        "--dataset", out.path().join("absent.jsonl").to_str().unwrap(),
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(4), "stderr: {}", stderr(&output));
    assert!(stderr(&output).contains("error:"));
}

#[test]
fn bad_config_exits_3() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "not_a_known_key = true\n").unwrap();
    let output = ncv(&[
        "eval",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--config", config.to_str().unwrap(),
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3), "stderr: {}", stderr(&output));
}

#[test]
fn cli_flags_override_defaults_in_the_method_tag() {
    let out = TempDir::new().unwrap();
    let output = ncv(&[
        "eval",
        "--dataset", fixture("demo_dataset.jsonl").to_str().unwrap(),
        "--method", "ncv",
        "--scripted", fixture("demo_scripted.json").to_str().unwrap(),
        "--out", out.path().to_str().unwrap(),
        "--k", "1",
        "--strategy", "veto",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("ncv@1-binary-veto"), "stdout: {}", stdout(&output));
}
