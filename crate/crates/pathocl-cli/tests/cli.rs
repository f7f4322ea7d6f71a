//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pathocl"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[track_caller]
fn assert_code(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout(output),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

#[test]
fn paths_dump_includes_airline_flight() {
    let output = run(&["paths", "--model", &fixture("airport.model.json")]);
    assert_code(&output, 0);
    let out = stdout(&output);
    assert!(out.contains(r#"{"path":["Airline","Flight"]}"#));
    assert!(out.contains(r#"{"path":["Flight","Airport"]}"#));
    assert!(out.contains(r#"{"path":["Airport"]}"#));
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        assert!(v.get("path").and_then(|p| p.as_array()).is_some());
    }
}

#[test]
fn rank_puts_a_flight_bearing_path_first() {
    let output = run(&[
        "rank",
        "--model",
        &fixture("airport.model.json"),
        "--text",
        "The maximum number of passengers on any flight may not exceed 1000.",
        "--metric",
        "jaccard",
        "--k",
        "3",
    ]);
    assert_code(&output, 0);
    let out = stdout(&output);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(first["rank"], 1);
    assert_eq!(first["metric"], "jaccard");
    let path: Vec<String> = first["path"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert!(path.contains(&"Flight".to_string()), "top path {path:?}");
}

#[test]
fn extract_emits_element_sets() {
    let output = run(&[
        "extract",
        "--text",
        "The maximum number of passengers on any flight may not exceed 1000.",
        "--id",
        "demo",
    ]);
    assert_code(&output, 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(v["id"], "demo");
    let elements: Vec<&str> = v["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_str().unwrap())
        .collect();
    assert_eq!(elements, ["flight", "maximum", "number", "passenger"]);
}

#[test]
fn validate_reports_the_pinned_verdict_schema() {
    let output = run(&[
        "validate",
        "--model",
        &fixture("airport.model.json"),
        "--constraint",
        "context Flight inv: self.passengers->size() <= 1000",
    ]);
    assert_code(&output, 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&output).trim()).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["category"], serde_json::Value::Null);
    assert_eq!(v["message"], "");
    assert_eq!(v["span"], serde_json::json!([0, 0]));

    let bad = run(&[
        "validate",
        "--model",
        &fixture("royal_loyal.model.json"),
        "--constraint",
        "context Membership inv: self.card->select(c | c.valid)->notEmpty()",
    ]);
    assert_code(&bad, 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&bad).trim()).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["category"], "iterexp_invalid_source");
    let span = v["span"].as_array().unwrap();
    assert!(span[1].as_u64() > span[0].as_u64());
}

#[test]
fn prompt_records_carry_the_pinned_fields() {
    let output = run(&[
        "prompt",
        "--model",
        &fixture("airport.model.json"),
        "--text",
        "The duration of any flight must be positive.",
        "--id",
        "ap-002",
        "--metric",
        "jaccard",
        "--k",
        "2",
    ]);
    assert_code(&output, 0);
    let out = stdout(&output);
    assert_eq!(out.lines().count(), 2);
    for (i, line) in out.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["spec_id"], "ap-002");
        assert_eq!(v["rank"], (i + 1) as u64);
        assert!(v["system"].as_str().unwrap().contains("OCL"));
        assert!(v["user"].as_str().unwrap().contains("UML classes (JSON):"));
        assert!(v["approx_tokens"].as_u64().unwrap() > 0);
    }
}

#[test]
fn generate_replays_the_canned_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let output = run(&[
        "generate",
        "--model",
        &fixture("airport.model.json"),
        "--specs",
        &fixture("airport.specs.jsonl"),
        "--metric",
        "jaccard",
        "--k",
        "1",
        "--backend",
        "replay",
        "--replay-fixture",
        &fixture("airport.replay.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_code(&output, 0);
    let log = std::fs::read_to_string(&out).unwrap();
    let first: serde_json::Value = serde_json::from_str(log.lines().next().unwrap()).unwrap();
    assert_eq!(first["spec_id"], "ap-001");
    assert_eq!(first["rank"], 1);
    assert_eq!(
        first["text"],
        "context Flight inv: self.passengers->size() <= 1000"
    );
    assert_eq!(first["backend"], "replay");
}

#[test]
fn usage_errors_exit_1() {
    let output = run(&["rank", "--model", "x.json", "--text", "t", "--metric", "sideways"]);
    assert_code(&output, 1);
    // missing both --text and --specs
    let output = run(&["rank", "--model", &fixture("airport.model.json")]);
    assert_code(&output, 1);
    // unknown subcommand
    let output = run(&["transmogrify"]);
    assert_code(&output, 1);
}

#[test]
fn data_errors_exit_2() {
    let output = run(&["ingest", "--model", "no-such-file.json"]);
    assert_code(&output, 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","classes":[{"name":"A"}],"associations":[
            {"ends":[{"class":"A","role":"a","multiplicity":"1"},
                     {"class":"Plane","role":"p","multiplicity":"*"}]}]}"#,
    )
    .unwrap();
    let output = run(&["ingest", "--model", bad.to_str().unwrap()]);
    assert_code(&output, 2);
}

#[test]
fn backend_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.replay.json");
    std::fs::write(&empty, "{}").unwrap();
    let output = run(&[
        "generate",
        "--model",
        &fixture("airport.model.json"),
        "--text",
        "The duration of any flight must be positive.",
        "--metric",
        "jaccard",
        "--k",
        "1",
        "--backend",
        "replay",
        "--replay-fixture",
        empty.to_str().unwrap(),
    ]);
    assert_code(&output, 3);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no replay entry"), "stderr: {stderr}");
}

#[test]
fn version_names_the_template_revision() {
    let output = run(&["--version"]);
    assert_code(&output, 0);
    assert!(stdout(&output).contains("prompt templates v1"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        format!(
            "model_file = {:?}\nmetric = \"jaccard\"\nk = 1\n",
            fixture("airport.model.json")
        ),
    )
    .unwrap();
    // model comes from the config file
    let output = bin()
        .args([
            "rank",
            "--config",
            config.to_str().unwrap(),
            "--text",
            "The duration of any flight must be positive.",
        ])
        .output()
        .unwrap();
    assert_code(&output, 0);
    assert_eq!(stdout(&output).lines().count(), 1, "config k = 1 applies");
    // the --k flag overrides the file
    let output = bin()
        .args([
            "rank",
            "--config",
            config.to_str().unwrap(),
            "--text",
            "The duration of any flight must be positive.",
            "--k",
            "2",
        ])
        .output()
        .unwrap();
    assert_code(&output, 0);
    assert_eq!(stdout(&output).lines().count(), 2, "flag k = 2 wins");
}

#[test]
fn evaluate_writes_a_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("run.jsonl");
    let generate = |out: &Path| {
        let output = run(&[
            "generate",
            "--model",
            &fixture("royal_loyal.model.json"),
            "--specs",
            &fixture("royal_loyal.specs.jsonl"),
            "--metric",
            "jaccard",
            "--k",
            "3",
            "--backend",
            "replay",
            "--replay-fixture",
            &fixture("royal_loyal.replay.json"),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_code(&output, 0);
    };
    generate(&log);
    let report_a = dir.path().join("a.json");
    let report_b = dir.path().join("b.json");
    for report in [&report_a, &report_b] {
        let output = run(&[
            "evaluate",
            "--model",
            &fixture("royal_loyal.model.json"),
            "--specs",
            &fixture("royal_loyal.specs.jsonl"),
            "--run-log",
            log.to_str().unwrap(),
            "--verdicts",
            &fixture("royal_loyal.verdicts.jsonl"),
            "--ks",
            "1,3",
            "--out",
            report.to_str().unwrap(),
        ]);
        assert_code(&output, 0);
    }
    let a = std::fs::read(&report_a).unwrap();
    let b = std::fs::read(&report_b).unwrap();
    assert_eq!(a, b, "reports must be byte-identical");
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(parsed["validity_at_k"]["3"], 100.0);
}
