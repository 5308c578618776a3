mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn stemlm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stemlm"))
        .args(args)
        .current_dir(cwd)
        .env_remove(stemlm::cli::DATA_DIR_ENV)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    let train: Vec<String> = stemlm::synthetic::markov_corpus(1, 200, 30)
        .iter()
        .map(|s| s.to_line())
        .collect();
    let test: Vec<String> = stemlm::synthetic::markov_corpus(2, 40, 35)
        .iter()
        .map(|s| s.to_line())
        .collect();
    fs::write(path.join("train.txt"), train.join("\n") + "\n").unwrap();
    fs::write(path.join("test.txt"), test.join("\n") + "\n").unwrap();
    (dir, path)
}

#[test]
fn train_and_ppl() {
    let (_dir, p) = setup();
    let o = stemlm(
        &["train", "--order", "3", "--method", "witten-bell", "train.txt", "-o", "model.arpa"],
        &p,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let arpa = fs::read_to_string(p.join("model.arpa")).unwrap();
    assert!(arpa.starts_with("\n\\data\\\n") || arpa.starts_with("\\data\\\n"));
    assert!(arpa.trim_end().ends_with("\\end\\"));

    let o = stemlm(&["ppl", "--model", "model.arpa", "test.txt"], &p);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["perplexity"].as_f64().unwrap() > 1.0);
    assert_eq!(report.as_object().unwrap().len(), 6);
    assert_eq!(stdout(&stemlm(&["ppl", "--model", "model.arpa", "test.txt"], &p)), stdout(&o));
}

#[test]
fn every_method_trains() {
    let (_dir, p) = setup();
    for method in ["good-turing", "linear", "absolute", "witten-bell", "kneser-ney"] {
        let o = stemlm(&["train", "--method", method, "train.txt", "-o", "m.arpa"], &p);
        assert!(o.status.success(), "{method}");
    }
}

#[test]
fn exit_codes() {
    let (_dir, p) = setup();
    let o = stemlm(&["train", "--method", "no-such-method", "train.txt"], &p);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(stemlm(&["frobnicate"], &p).status.code(), Some(1));
    assert_eq!(stemlm(&["vocab", "--nope"], &p).status.code(), Some(1));
    fs::write(p.join("bad.arpa"), "\\data\\\nngram 1=2\n\n\\1-grams:\n-1\ta\n\n\\end\\\n").unwrap();
    assert_eq!(stemlm(&["ppl", "--model", "bad.arpa", "test.txt"], &p).status.code(), Some(2));
    assert_eq!(stemlm(&["vocab", "missing.txt"], &p).status.code(), Some(2));
    let sweep = stemlm(
        &["sweep", "--train", "train.txt", "--test", "test.txt", "--fractions", "0,150"],
        &p,
    );
    assert_eq!(sweep.status.code(), Some(1));
}

#[test]
fn vocab_and_count() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), "a b a\n\nb c\n").unwrap();
    let o = stemlm(&["vocab", "c.txt"], dir.path());
    let stats: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(stats["sentence_count"], 2);
    assert_eq!(stats["token_count"], 5);
    assert_eq!(stats["unique_word_count"], 3);
    let o = stemlm(&["count", "--order", "2", "c.txt"], dir.path());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "a\t2"));
    assert!(text.lines().any(|l| l == "<s> a\t1"));
}

#[test]
fn supervised_split_and_rejoin() {
    let dir = tempfile::tempdir().unwrap();
    let words = common::telugu_example_words();
    fs::write(dir.path().join("w.txt"), words.join(" ") + "\n").unwrap();
    let o = stemlm(
        &["stem-rules", "w.txt", "-o", "split.txt", "--report", "report.json"],
        dir.path(),
    );
    assert!(o.status.success());
    let split = fs::read_to_string(dir.path().join("split.txt")).unwrap();
    assert!(split.contains("చదువు +చున్నాడు"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(report["split_tokens"].as_u64().unwrap() > 40);
    let o = stemlm(&["rejoin", "split.txt"], dir.path());
    assert_eq!(stdout(&o).trim_end(), words.join(" "));
}

#[test]
fn rules_from_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("telugu_suffixes.tsv"), "ing\n").unwrap();
    fs::write(dir.path().join("w.txt"), "walking sing\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_stemlm"))
        .args(["stem-rules", "w.txt"])
        .current_dir(dir.path())
        .env(stemlm::cli::DATA_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "walk +ing sing\n");
}

#[test]
fn learn_apply_rejoin() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), "ab ac db dc\nxy ab\n").unwrap();
    let o = stemlm(
        &[
            "stem-learn", "--t-stem", "2", "--t-suffix", "2", "--stems", "stems.txt", "--suffixes",
            "suffixes.txt", "--edges", "edges.tsv", "c.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["stems"], 2);
    assert_eq!(fs::read_to_string(dir.path().join("stems.txt")).unwrap(), "a\nd\n");
    assert_eq!(fs::read_to_string(dir.path().join("suffixes.txt")).unwrap(), "b\nc\n");
    let o = stemlm(&["stem-apply", "--edges", "edges.tsv", "c.txt", "-o", "s.txt"], dir.path());
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(dir.path().join("s.txt")).unwrap(),
        "a +b a +c d +b d +c\nxy a +b\n"
    );
    let o = stemlm(&["rejoin", "s.txt"], dir.path());
    assert_eq!(stdout(&o), "ab ac db dc\nxy ab\n");
}

#[test]
fn wer_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ref.txt"), "a b c\nd e\n").unwrap();
    fs::write(dir.path().join("hyp.txt"), "a x c d\nd e\n").unwrap();
    let o = stemlm(&["wer", "ref.txt", "hyp.txt"], dir.path());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["reference_length"], 5);
    assert_eq!(r["substitutions"], 1);
    assert_eq!(r["insertions"], 1);
    assert_eq!(r["correct"], 4);
    assert!((r["wer_percent"].as_f64().unwrap() - 40.0).abs() < 1e-9);
    fs::write(dir.path().join("short.txt"), "a b c\n").unwrap();
    assert_eq!(stemlm(&["wer", "ref.txt", "short.txt"], dir.path()).status.code(), Some(2));
}

#[test]
fn experiment_csv() {
    let (_dir, p) = setup();
    let o = stemlm(
        &["experiment", "--train", "train.txt", "--test", "test.txt", "--output-dir", "out"],
        &p,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "hit_3gram_percent"));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let modes: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(modes, ["none", "supervised", "unsupervised", "combined"]);
    let wer_col = headers.iter().position(|h| h == "wer_percent").unwrap();
    assert!(rows.iter().all(|r| r[wer_col].is_empty()));
    assert!(p.join("out/unsupervised/edges.tsv").exists());
    assert!(p.join("out/combined/model.arpa").exists());

    let again = stemlm(&["experiment", "--train", "train.txt", "--test", "test.txt"], &p);
    assert_eq!(stdout(&again), text);
}

#[test]
fn experiment_from_config_file() {
    let (_dir, p) = setup();
    fs::write(
        p.join("config.json"),
        r#"{"train": "train.txt", "test": "test.txt", "modes": ["none"], "method": "kneser-ney", "order": 2}"#,
    )
    .unwrap();
    let o = stemlm(&["experiment", "--config", "config.json"], &p);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().next().unwrap().contains("hit_2gram_percent"));
}

#[test]
fn sweep_reaches_zero_oov() {
    let (_dir, p) = setup();
    let o = stemlm(
        &["sweep", "--train", "train.txt", "--test", "test.txt", "--fractions", "0,50,100"],
        &p,
    );
    assert!(o.status.success());
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let oov: Vec<u64> = reader
        .records()
        .map(|r| r.unwrap()[4].parse().unwrap())
        .collect();
    assert_eq!(oov.len(), 3);
    assert!(oov.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(oov[2], 0);
}

#[test]
fn inject_words_removes_oovs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("train.txt"), "a b\nb a\n").unwrap();
    fs::write(dir.path().join("test.txt"), "a z b\n").unwrap();
    fs::write(dir.path().join("oov.txt"), "z\n").unwrap();
    stemlm(&["train", "--order", "2", "train.txt", "--inject-words", "oov.txt", "-o", "m.arpa"], dir.path());
    let o = stemlm(&["ppl", "--model", "m.arpa", "test.txt"], dir.path());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["oov_count"], 0);
}
