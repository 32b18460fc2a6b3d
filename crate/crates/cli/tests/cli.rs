use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use verbprobe::qamodel::{load_checkpoint, Model};

fn wordnet_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/wordnet-3.0")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verbprobe"))
        .args(args)
        .env("VERBPROBE_WORDNET_DIR", wordnet_dir())
        .output()
        .expect("spawn verbprobe")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "verbprobe {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn err(args: &[&str]) -> String {
    let out = run(args);
    assert!(!out.status.success(), "verbprobe {args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Small corpus, one-epoch reader, perturbations of the held-out questions.
struct Pipeline {
    tmp: TempDir,
}

impl Pipeline {
    fn new() -> Self {
        let tmp = TempDir::new().unwrap();
        let spec = tmp.path().join("spec.json");
        fs::write(&spec, r#"{"contexts": 12}"#).unwrap();
        let train = tmp.path().join("train");
        ok(&["train", "--synthetic", "unique", "--contrast-spec", p(&spec), "--epochs", "1", "--holdout", "0.25", "--out-dir", p(&train)]);
        ok(&["negate", "--dataset", p(&train.join("heldout.json")), "--out-dir", p(&tmp.path().join("neg"))]);
        Pipeline { tmp }
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.tmp.path().join(rel)
    }

    fn probe(&self, perturbations: &Path, out: &str, extra: &[&str]) -> Output {
        let mut args: Vec<String> = vec![
            "probe".into(),
            "--dataset".into(),
            p(&self.path("train/heldout.json")).into(),
            "--checkpoint".into(),
            p(&self.path("train/model.json")).into(),
            "--perturbations".into(),
            p(perturbations).into(),
            "--out-dir".into(),
            p(&self.path(out)).into(),
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        run(&refs)
    }
}

#[test]
fn negate_is_deterministic_per_seed() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let stdout = ok(&["negate", "--dataset", &fixture("golden.json"), "--seed", "7", "--out-dir", p(&a)]);
    ok(&["negate", "--dataset", &fixture("golden.json"), "--seed", "7", "--workers", "2", "--out-dir", p(&b)]);
    assert_eq!(fs::read(a.join("perturbations.jsonl")).unwrap(), fs::read(b.join("perturbations.jsonl")).unwrap());
    assert!(stdout.contains("ANTONYM          1"));
    assert!(stdout.contains("AUX_NEGATION     1"));
    assert!(a.join("strategy_histogram.csv").exists());
}

#[test]
fn verb_free_questions_stay_unchanged() {
    let tmp = TempDir::new().unwrap();
    ok(&["negate", "--dataset", &fixture("verb_free.json"), "--out-dir", p(tmp.path())]);
    let text = fs::read_to_string(tmp.path().join("perturbations.jsonl")).unwrap();
    let records: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 3);
    for r in records {
        assert_eq!(r["strategy"], "UNCHANGED");
        assert_eq!(r["original"], r["perturbed"]);
    }
}

#[test]
fn missing_wordnet_is_an_error() {
    let tmp = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_verbprobe"))
        .args(["negate", "--dataset", &fixture("golden.json"), "--out-dir", p(tmp.path())])
        .env_remove("VERBPROBE_WORDNET_DIR")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("VERBPROBE_WORDNET_DIR"));
    let stderr = err(&["negate", "--dataset", &fixture("golden.json"), "--wordnet-dir", p(tmp.path()), "--out-dir", p(tmp.path())]);
    assert!(stderr.contains("index.verb"), "{stderr}");
}

#[test]
fn malformed_dataset_names_the_json_path() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"data": [{"title": "t", "paragraphs": [{"context": "c", "qas": [{"question": "q?"}]}]}]}"#)
        .unwrap();
    let stderr = err(&["negate", "--dataset", p(&bad), "--out-dir", p(tmp.path())]);
    assert!(stderr.contains("data[0].paragraphs[0].qas[0]"), "{stderr}");
}

#[test]
fn gen_contrast_and_diagnose() {
    let tmp = TempDir::new().unwrap();
    let spec = tmp.path().join("spec.json");
    fs::write(&spec, r#"{"contexts": 6}"#).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&["gen-contrast", "--spec", p(&spec), "--seed", "42", "--out-dir", p(&a)]);
    ok(&["gen-contrast", "--spec", p(&spec), "--seed", "42", "--out-dir", p(&b)]);
    for f in ["unique.json", "contrast.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
    let du = tmp.path().join("du");
    ok(&["diagnose", "--dataset", p(&a.join("unique.json")), "--out-dir", p(&du)]);
    assert_eq!(json(&du.join("uniqueness_report.json"))["corpus_fraction"], 1.0);
    let dc = tmp.path().join("dc");
    ok(&["diagnose", "--dataset", p(&a.join("contrast.json")), "--format", "json", "--out-dir", p(&dc)]);
    assert!(json(&dc.join("uniqueness_report.json"))["corpus_fraction"].as_f64().unwrap() < 0.5);
    assert_eq!(json(&dc.join("uniqueness.json"))["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn zero_epochs_keep_the_initialization() {
    let tmp = TempDir::new().unwrap();
    let spec = tmp.path().join("spec.json");
    fs::write(&spec, r#"{"contexts": 4}"#).unwrap();
    ok(&["train", "--synthetic", "contrast", "--contrast-spec", p(&spec), "--epochs", "0", "--seed", "5", "--out-dir", p(tmp.path())]);
    let reader = load_checkpoint(tmp.path().join("model.json")).unwrap();
    let init = Model::new(reader.model.config().clone()).unwrap();
    assert_eq!(reader.model.params(), init.params());
    assert_eq!(reader.model.config().seed, 5);
}

#[test]
fn grad_check_flag_and_subcommand() {
    let tmp = TempDir::new().unwrap();
    let spec = tmp.path().join("spec.json");
    fs::write(&spec, r#"{"contexts": 4}"#).unwrap();
    let stdout = ok(&[
        "train", "--synthetic", "unique", "--contrast-spec", p(&spec), "--epochs", "1", "--grad-check", "--out-dir", p(tmp.path()),
    ]);
    assert!(stdout.contains("max relative error"), "{stdout}");
    let report = json(&tmp.path().join("grad_check.json"));
    assert!(report["max_relative_error"].as_f64().unwrap() < 1e-4);
    let out = tmp.path().join("gc");
    let stdout = ok(&[
        "grad-check", "--synthetic", "unique", "--contrast-spec", p(&spec), "--examples", "2",
        "--checkpoint", p(&tmp.path().join("model.json")), "--out-dir", p(&out),
    ]);
    assert!(stdout.contains("example u0000q0"), "{stdout}");
    assert_eq!(json(&out.join("grad_check.json")).as_array().unwrap().len(), 2);
}

#[test]
fn probe_outputs_and_report_rebuild() {
    let pl = Pipeline::new();
    let out = pl.probe(&pl.path("neg/perturbations.jsonl"), "probe", &["--format", "json", "--heatmap-words", "when,nosuchword"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rate = stdout.lines().find(|l| l.starts_with("match rate")).unwrap().split_whitespace().last().unwrap();
    assert_eq!(rate.split('.').nth(1).map(str::len), Some(3), "{rate}");
    let dir = pl.path("probe");
    let summary = json(&dir.join("summary.json"));
    for key in ["pearson_entropy_attention", "pearson_variance_attention", "spearman_variance_attention"] {
        assert!(summary.get(key).is_some(), "{key}");
    }
    assert!(dir.join("heatmap_When.svg").exists());
    let warnings = fs::read_to_string(dir.join("warnings.json")).unwrap();
    assert!(warnings.contains("nosuchword"));

    let rebuilt = pl.path("rebuilt");
    ok(&[
        "report", "--traces", p(&dir.join("traces.jsonl")), "--format", "json", "--heatmap-words", "when",
        "--out-dir", p(&rebuilt),
    ]);
    for f in ["summary.json", "match_report.json", "pos_attention.json", "series.json", "ks_tests.json", "scatter_entropy.svg", "heatmap_When.svg"] {
        assert_eq!(fs::read(dir.join(f)).unwrap(), fs::read(rebuilt.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn probe_rejects_orphans_and_empty_perturbations() {
    let pl = Pipeline::new();
    let good = fs::read_to_string(pl.path("neg/perturbations.jsonl")).unwrap();
    let first: Value = serde_json::from_str(good.lines().next().unwrap()).unwrap();
    let mut ghost = first.clone();
    ghost["id"] = "ghost-1".into();
    let orphaned = pl.path("orphans.jsonl");
    fs::write(&orphaned, format!("{good}{}\n", serde_json::to_string(&ghost).unwrap())).unwrap();
    let out = pl.probe(&orphaned, "o", &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost-1"));

    let empty = pl.path("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let out = pl.probe(&empty, "e", &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}
