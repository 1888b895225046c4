use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sarkas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sarkas"))
        .args(args)
        .output()
        .unwrap()
}

fn sarkas_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sarkas"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn small_corpus(dir: &Path, seed: &str) -> PathBuf {
    let path = dir.join(format!("corpus-{seed}.jsonl"));
    let p = path.to_str().unwrap();
    ok(&sarkas(&[
        "gen-corpus",
        "--seed",
        seed,
        "--neutral",
        "120",
        "--positive",
        "90",
        "--negative",
        "70",
        "-o",
        p,
    ]));
    path
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push((
                    path.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&path).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn normalize_reads_stdin_line_by_line() {
    let out = ok(&sarkas_stdin(
        &["normalize"],
        "ga2l\ncemunguuudh\nCEMUNGUDH!!\n",
    ));
    assert_eq!(out, "gagal\nsemangat\nsemangat\n");

    let json = ok(&sarkas_stdin(&["--json", "normalize"], "ga2l bgt\n"));
    let tokens: Vec<String> = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(tokens.len(), 2);
    assert_eq!(tokens[0], "gagal");
}

#[test]
fn build_lexicon_merges_duplicate_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("raw.tsv");
    fs::write(
        &input,
        "# term\tpos\tneg\ncocok\t0.625\t0\ncocok\t0.375\t0\nmemajukan\t0.375\t0.125\n",
    )
    .unwrap();
    let output = dir.path().join("lexicon.tsv");
    ok(&sarkas(&[
        "build-lexicon",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ]));
    let text = fs::read_to_string(&output).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["cocok\t0.5\t0", "memajukan\t0.375\t0.125"]);
}

#[test]
fn training_twice_writes_identical_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path(), "5");
    let mut bundles = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        ok(&sarkas(&[
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
            "--method",
            "leveled",
            "--algorithm",
            "svm",
        ]));
        bundles.push(files(&out));
    }
    assert!(!bundles[0].is_empty());
    assert_eq!(bundles[0], bundles[1]);
}

#[test]
fn corpus_without_positives_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let out = dir.path().join("bundle");
    ok(&sarkas(&[
        "gen-corpus",
        "--positive",
        "0",
        "--neutral",
        "30",
        "--negative",
        "30",
        "-o",
        corpus.to_str().unwrap(),
    ]));
    let res = sarkas(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error:"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(sarkas(&["--bogus", "normalize"]).status.code(), Some(2));
    assert_eq!(sarkas(&["train"]).status.code(), Some(2));
    assert_eq!(sarkas(&["experiment", "nonsense"]).status.code(), Some(2));
}

#[test]
fn predict_and_evaluate_against_a_trained_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path(), "6");
    let bundle = dir.path().join("bundle");
    ok(&sarkas(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "-o",
        bundle.to_str().unwrap(),
    ]));

    let docs = fs::read_to_string(&corpus).unwrap();
    let preds = ok(&sarkas(&[
        "predict",
        "--bundle",
        bundle.to_str().unwrap(),
        corpus.to_str().unwrap(),
    ]));
    assert_eq!(preds.lines().count(), docs.lines().count());
    for line in preds.lines() {
        let p: Value = serde_json::from_str(line).unwrap();
        let positive = p["sentiment"] == "pos";
        assert_eq!(!p["sarcasm"].is_null(), positive, "{line}");
        if p["sarcasm"] == true {
            assert_eq!(p["final_label"], "neg");
        }
    }

    let from_stdin = ok(&sarkas_stdin(
        &["predict", "--bundle", bundle.to_str().unwrap()],
        &docs,
    ));
    assert_eq!(from_stdin, preds);

    let json = ok(&sarkas(&[
        "--json",
        "evaluate",
        "--bundle",
        bundle.to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    let m: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(m["total"], docs.lines().count());
    let acc = m["accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));

    let table = ok(&sarkas(&[
        "evaluate",
        "--bundle",
        bundle.to_str().unwrap(),
        "--corpus",
        corpus.to_str().unwrap(),
    ]));
    assert!(table.starts_with("accuracy "));
}

#[test]
fn experiment_json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = small_corpus(dir.path(), "7");
    let args = [
        "--json",
        "experiment",
        "method",
        "--corpus",
        corpus.to_str().unwrap(),
    ];
    let a = ok(&sarkas(&args));
    let b = ok(&sarkas(&args));
    assert_eq!(a, b);
    let report: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(report["experiment"], "method");
    let sections = report["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 2);
    assert_eq!(sections[0]["rows"].as_array().unwrap().len(), 3);

    let tsv = ok(&sarkas(&[
        "experiment",
        "score",
        "--corpus",
        corpus.to_str().unwrap(),
        "--tsv",
    ]));
    assert!(tsv.starts_with("section\trow\tcolumn\taccuracy"));
    assert_eq!(tsv.lines().count(), 1 + 6);
}

#[test]
fn gen_corpus_depends_only_on_seed() {
    let a = ok(&sarkas(&[
        "gen-corpus",
        "--seed",
        "3",
        "--neutral",
        "20",
        "--positive",
        "20",
        "--negative",
        "20",
    ]));
    let b = ok(&sarkas(&[
        "gen-corpus",
        "--seed",
        "3",
        "--neutral",
        "20",
        "--positive",
        "20",
        "--negative",
        "20",
    ]));
    let c = ok(&sarkas(&[
        "gen-corpus",
        "--seed",
        "4",
        "--neutral",
        "20",
        "--positive",
        "20",
        "--negative",
        "20",
    ]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 60);
}
