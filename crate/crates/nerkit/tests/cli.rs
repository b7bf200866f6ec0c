mod common;

use std::io::Cursor;
use std::path::Path;
use std::process::Command;

use nerkit::annotate::annotate;
use nerkit::cli::run;
use nerkit::dataset_io::load_dataset;
use nerkit::model_file::{load_model, save_model};
use nerkit::report::{render_eval_report, Format};
use nerkit_core::{evaluate, train, Mode, Split, TrainConfig};
use serde_json::Value;

use common::fixture;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nerkit(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["nerkit"];
    argv.extend_from_slice(args);
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trained_model(dir: &Path, data: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join("model.json");
    let mut args = vec!["train", "--data", data, "--out", s(&path), "--seed", "42"];
    args.extend_from_slice(extra);
    let o = nerkit(&args, "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    path
}

#[test]
fn no_arguments_prints_usage() {
    let o = nerkit(&[], "");
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("Usage"), "{}", o.stderr);
}

#[test]
fn help_exits_zero() {
    let o = nerkit(&["--help"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("matrix"));
}

#[test]
fn zero_epochs_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m.json");
    let news = fixture("synth-news");
    let o = nerkit(&["train", "--data", s(&news), "--out", s(&out), "--epochs", "0"], "");
    assert_eq!(o.code, 1);
    assert!(!out.exists());
}

#[test]
fn missing_model_is_a_data_error() {
    let conll = fixture("conll-mini");
    let o = nerkit(&["evaluate", "--model", "/nonexistent/model.json", "--data", s(&conll)], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("error:"));
}

#[test]
fn missing_dataset_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = nerkit(&["stats", "--data", s(tmp.path())], "");
    assert_eq!(o.code, 2);
}

#[test]
fn evaluate_matches_library() {
    let tmp = tempfile::tempdir().unwrap();
    let conll = fixture("conll-mini");
    let model_path = trained_model(tmp.path(), s(&conll), &[]);
    let o = nerkit(
        &["evaluate", "--model", s(&model_path), "--data", s(&conll), "--type-ignored", "--format", "json"],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);

    let model = load_model(&model_path).unwrap();
    let dataset = load_dataset(&conll).unwrap();
    let report = evaluate(&model, dataset.split(Split::Test).unwrap(), Mode::TypeIgnored).unwrap();
    assert_eq!(o.stdout, render_eval_report(&report, Format::Json));

    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["mode"], "type-ignored");
    let counts = &v["counts"];
    assert_eq!(counts["tp"].as_u64().unwrap() + counts["fn"].as_u64().unwrap(), 5);
}

#[test]
fn evaluate_tsv_and_out_file() {
    let tmp = tempfile::tempdir().unwrap();
    let news = fixture("synth-news");
    let model_path = trained_model(tmp.path(), s(&news), &[]);
    let report = tmp.path().join("report.tsv");
    let o = nerkit(
        &["evaluate", "--model", s(&model_path), "--data", s(&news), "--split", "valid",
          "--format", "tsv", "--out", s(&report)],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.lines().count() >= 2);
}

#[test]
fn predict_text_matches_library() {
    let tmp = tempfile::tempdir().unwrap();
    let news = fixture("synth-news");
    let model_path = trained_model(tmp.path(), s(&news), &[]);
    let text = "Dante was born in Florence.";
    let o = nerkit(&["predict", "--model", s(&model_path), "--text", text], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 1);

    let model = load_model(&model_path).unwrap();
    let expected = serde_json::to_string(&annotate(text, &model).unwrap()).unwrap();
    assert_eq!(lines[0], expected);
}

#[test]
fn predict_reads_stdin_lines() {
    let tmp = tempfile::tempdir().unwrap();
    let news = fixture("synth-news");
    let model_path = trained_model(tmp.path(), s(&news), &[]);
    let o = nerkit(&["predict", "--model", s(&model_path)], "Maria went home .\n\nParis is big .\n");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let lines: Vec<Value> = o.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["tokens"].as_array().unwrap().len(), 4);
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let data = format!("{},{}", fixture("synth-news").display(), fixture("synth-bio").display());
    let bin = env!("CARGO_BIN_EXE_nerkit");
    let train_to = |name: &str, env_seed: Option<&str>, flag: Option<&str>| {
        let out = tmp.path().join(name);
        let mut cmd = Command::new(bin);
        cmd.args(["train", "--data", &data, "--epochs", "3", "--out"]).arg(&out);
        cmd.env_remove("NERKIT_SEED").env_remove("SOURCE_DATE_EPOCH");
        if let Some(seed) = env_seed {
            cmd.env("NERKIT_SEED", seed);
        }
        if let Some(seed) = flag {
            cmd.args(["--seed", seed]);
        }
        assert!(cmd.status().unwrap().success());
        load_model(&out).unwrap()
    };
    let env7 = train_to("a.json", Some("7"), None);
    let flag7 = train_to("b.json", None, Some("7"));
    let flag_wins = train_to("c.json", Some("1000"), Some("7"));
    assert_eq!(env7.config().seed, 7);
    assert_eq!(env7, flag7);
    assert_eq!(flag_wins, flag7);
    let default = train_to("d.json", None, None);
    assert_eq!(default.config().seed, 42);
}

#[test]
fn lowercase_warning_for_lowercase_model() {
    let tmp = tempfile::tempdir().unwrap();
    let news = fixture("synth-news");
    let model_path = trained_model(tmp.path(), s(&news), &["--lowercase"]);
    let o = nerkit(&["evaluate", "--model", s(&model_path), "--data", s(&news), "--lowercase"], "");
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("warning"), "{}", o.stderr);
    let plain = nerkit(&["evaluate", "--model", s(&model_path), "--data", s(&news)], "");
    assert_eq!(o.stdout, plain.stdout);
}

#[test]
fn stats_on_conll_mini() {
    let o = nerkit(&["stats", "--data", s(&fixture("conll-mini"))], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["name"], "conll-mini");
    assert_eq!(v["sentences"]["train"], 8);
    assert_eq!(v["sentences"]["valid"], 2);
    assert_eq!(v["sentences"]["test"], 3);
    assert_eq!(v["entity_types"], 4);
    assert_eq!(v["labels"][0], "O");
}

#[test]
fn matrix_writes_report_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("matrix.json");
    let data = format!("{},{}", fixture("synth-news").display(), fixture("synth-bio").display());
    let o = nerkit(
        &["matrix", "--data", &data, "--include-all", "--out", s(&out), "--jobs", "2"],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m["rows"], serde_json::json!(["synth-news", "synth-bio", "all"]));
    assert_eq!(m["cols"], serde_json::json!(["synth-news", "synth-bio"]));
    let manifest = tmp.path().join("matrix.json.manifest.json");
    let man: Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(man["seed"], 42);
    assert_eq!(man["rows"].as_array().unwrap().len(), 3);

    let md = tmp.path().join("matrix.md");
    let o = nerkit(&["matrix", "--data", &data, "--out", s(&md), "--type-ignored"], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(std::fs::read_to_string(md).unwrap().starts_with("| train\\test |"));
}

#[test]
fn library_training_matches_cli_training() {
    let tmp = tempfile::tempdir().unwrap();
    let news = fixture("synth-news");
    let cli_path = trained_model(tmp.path(), s(&news), &[]);
    let model = train(&[load_dataset(&news).unwrap()], &TrainConfig::default()).unwrap();
    let lib_path = tmp.path().join("lib.json");
    save_model(&model, &lib_path).unwrap();
    assert_eq!(std::fs::read(cli_path).unwrap(), std::fs::read(lib_path).unwrap());
}
