//! End-to-end tests of the `topicmine` binary: exit codes, error channels,
//! file outputs, and configuration precedence.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_topicmine");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process should exit normally")
}

/// Eight tiny records over two obvious themes, two of them Chinese.
fn write_records(path: &Path) {
    let lines = [
        r#"{"id":"p1","year":2014,"language":"en","title":"","abstract":"solver mesh boundary solver mesh gradient"}"#,
        r#"{"id":"p2","year":2014,"language":"en","title":"","abstract":"mesh gradient solver boundary boundary"}"#,
        r#"{"id":"p3","year":2015,"language":"en","title":"","abstract":"solver boundary mesh mesh gradient solver"}"#,
        r#"{"id":"p4","year":2015,"language":"en","title":"","abstract":"cache query index cache storage"}"#,
        r#"{"id":"p5","year":2016,"language":"en","title":"","abstract":"index storage query cache index"}"#,
        r#"{"id":"p6","year":2016,"language":"en","title":"","abstract":"query cache storage index storage"}"#,
        r#"{"id":"p7","year":2017,"language":"zh","title":"","abstract":"网格剖分求解器网格剖分边界条件"}"#,
        r#"{"id":"p8","year":2017,"language":"zh","title":"","abstract":"缓存策略数据索引缓存策略"}"#,
    ];
    std::fs::write(path, lines.join("\n") + "\n").unwrap();
}

fn write_lexicon(path: &Path) {
    std::fs::write(path, "网格剖分\n求解器\n边界条件\n缓存策略\n数据索引\n").unwrap();
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(exit_code(&help), 0);
    assert!(stdout(&help).contains("Usage"));
    assert!(stdout(&help).contains("ingest"));

    let version = run(&["--version"]);
    assert_eq!(exit_code(&version), 0);
    assert!(stdout(&version).contains("topicmine"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let output = run(&["ingest", "--no-such-flag"]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let output = run(&[]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn missing_input_file_is_an_io_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = run(&[
        "ingest",
        "--input",
        "/nonexistent/records.jsonl",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    let message = stderr(&output);
    assert!(message.starts_with("error: "), "got: {message}");
    assert!(message.contains("/nonexistent/records.jsonl"));
}

#[test]
fn malformed_record_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    std::fs::write(
        &records,
        r#"{"id":"p1","year":"20xx","language":"en","title":"","abstract":"a"}"#,
    )
    .unwrap();
    let output = run(&[
        "ingest",
        "--input",
        records.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 3);
    let message = stderr(&output);
    assert!(message.contains("year"), "got: {message}");
    assert!(message.contains("line 1"), "got: {message}");
}

#[test]
fn ingest_writes_bundle_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let lexicon = dir.path().join("lexicon.txt");
    write_records(&records);
    write_lexicon(&lexicon);
    let out = dir.path().join("out");

    let output = run(&[
        "ingest",
        "--input",
        records.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("ingest: kept 8 of 8 records"));
    assert!(out.join("corpus.json").is_file());

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("ingest_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["records_in"], 8);
    assert_eq!(report["documents_kept"], 8);
}

#[test]
fn analyze_emits_the_documented_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let lexicon = dir.path().join("lexicon.txt");
    write_records(&records);
    write_lexicon(&lexicon);
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap();

    let ingest = run(&[
        "ingest",
        "--input",
        records.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
        "--out",
        out_str,
    ]);
    assert_eq!(exit_code(&ingest), 0, "stderr: {}", stderr(&ingest));

    let analyze = run(&[
        "analyze",
        "--out",
        out_str,
        "--num-topics",
        "2",
        "--iterations",
        "80",
        "--burn-in",
        "20",
        "--top-n",
        "4",
    ]);
    assert_eq!(exit_code(&analyze), 0, "stderr: {}", stderr(&analyze));

    for name in [
        "model.json",
        "model.bin",
        "topic_top_words.csv",
        "distance_kl.csv",
        "distance_cosine.csv",
        "cooccurrence.gexf",
        "cooccurrence_edges.csv",
        "cooccurrence_metrics.json",
        "trends_all.csv",
        "trends_all.svg",
        "trends_topics.csv",
        "trends_topics.svg",
    ] {
        assert!(out.join(name).is_file(), "missing artifact {name}");
    }

    let trends = std::fs::read_to_string(out.join("trends_topics.csv")).unwrap();
    assert!(trends.starts_with("year,topic_0,topic_1\n"));
    // 2014..=2017 inclusive.
    assert_eq!(trends.lines().count(), 5);
}

#[test]
fn analyze_without_num_topics_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    write_records(&records);
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap();

    let ingest = run(&["ingest", "--input", records.to_str().unwrap(), "--out", out_str]);
    assert_eq!(exit_code(&ingest), 0);

    let analyze = run(&["analyze", "--out", out_str]);
    assert_eq!(exit_code(&analyze), 3);
    assert!(stderr(&analyze).contains("num-topics"));
}

#[test]
fn config_file_supplies_values_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    write_records(&records);
    let conf_out = dir.path().join("from_conf");
    let flag_out = dir.path().join("from_flag");
    let conf = dir.path().join("pipeline.conf");
    std::fs::write(
        &conf,
        format!(
            "# test configuration\ninput = {}\nout = {}\nmin-df = 1\n",
            records.display(),
            conf_out.display()
        ),
    )
    .unwrap();
    let conf_str = conf.to_str().unwrap();

    // File alone decides the output directory...
    let from_conf = run(&["ingest", "--config", conf_str]);
    assert_eq!(exit_code(&from_conf), 0, "stderr: {}", stderr(&from_conf));
    assert!(conf_out.join("corpus.json").is_file());

    // ...and the flag wins over the file.
    let from_flag = run(&[
        "ingest",
        "--config",
        conf_str,
        "--out",
        flag_out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&from_flag), 0);
    assert!(flag_out.join("corpus.json").is_file());
}

#[test]
fn unknown_config_key_is_rejected_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("pipeline.conf");
    std::fs::write(&conf, "min-df = 1\nbogus-key = 7\n").unwrap();

    let output = run(&["ingest", "--config", conf.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 3);
    let message = stderr(&output);
    assert!(message.contains("bogus-key"), "got: {message}");
    assert!(message.contains("line 2"), "got: {message}");
}

#[test]
fn zero_threads_is_rejected() {
    let output = run(&["ingest", "--threads", "0", "--input", "x.jsonl"]);
    assert_eq!(exit_code(&output), 3);
    assert!(stderr(&output).contains("--threads"));
}

#[test]
fn export_rejects_a_model_bundle_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    write_records(&records);
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap();

    let ingest = run(&["ingest", "--input", records.to_str().unwrap(), "--out", out_str]);
    assert_eq!(exit_code(&ingest), 0);
    let analyze = run(&[
        "analyze", "--out", out_str, "--num-topics", "2", "--iterations", "40", "--burn-in", "10",
    ]);
    assert_eq!(exit_code(&analyze), 0, "stderr: {}", stderr(&analyze));

    // Re-ingest into the same bundle path with one record dropped: the saved
    // model no longer matches the bundle.
    let shorter = dir.path().join("shorter.jsonl");
    let all = std::fs::read_to_string(&records).unwrap();
    let keep: Vec<&str> = all.lines().take(6).collect();
    std::fs::write(&shorter, keep.join("\n") + "\n").unwrap();
    let reingest = run(&["ingest", "--input", shorter.to_str().unwrap(), "--out", out_str]);
    assert_eq!(exit_code(&reingest), 0);

    let export = run(&[
        "export",
        "--out",
        out_str,
        "--model",
        out.join("model.bin").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&export), 3);
    assert!(stderr(&export).contains("bundle"));
}

#[test]
fn rerunning_analyze_reproduces_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    write_records(&records);
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap();

    let ingest = run(&["ingest", "--input", records.to_str().unwrap(), "--out", out_str]);
    assert_eq!(exit_code(&ingest), 0);

    let args = [
        "analyze", "--out", out_str, "--num-topics", "2", "--iterations", "60", "--burn-in", "20",
    ];
    assert_eq!(exit_code(&run(&args)), 0);
    let first = std::fs::read(out.join("model.bin")).unwrap();
    let first_gexf = std::fs::read(out.join("cooccurrence.gexf")).unwrap();

    assert_eq!(exit_code(&run(&args)), 0);
    assert_eq!(std::fs::read(out.join("model.bin")).unwrap(), first);
    assert_eq!(std::fs::read(out.join("cooccurrence.gexf")).unwrap(), first_gexf);
}
