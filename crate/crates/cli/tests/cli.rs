//! Black-box tests of the command-line interface: exit codes, partial
//! failure isolation, configuration errors, and scheduling-independent
//! output.

use std::path::Path;
use std::process::{Command, Output};

fn newstension(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newstension"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn expect_code(output: &Output, code: i32, what: &str) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "{what}: stderr:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn generate(dir: &Path) {
    let output = newstension(dir, &["fixtures", "generate", "--out", "."]);
    expect_code(&output, 0, "fixtures generate");
}

fn analyze(dir: &Path, config: &str, out: &str) -> Output {
    newstension(dir, &["analyze", "--manifest", "manifest.jsonl", "--config", config, "--out", out])
}

fn video_records(dir: &Path, report: &str) -> Vec<serde_json::Value> {
    std::fs::read_to_string(dir.join(report))
        .unwrap()
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .filter(|record: &serde_json::Value| record["record"] == "video")
        .collect()
}

/// One unreadable input fails that video alone: the run exits 1, the
/// other 19 videos keep their results, and evaluation proceeds on the
/// remainder.
#[test]
fn broken_video_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    std::fs::remove_file(dir.path().join("media/clip-07.wav")).unwrap();

    let output = analyze(dir.path(), "config.toml", "reports.jsonl");
    expect_code(&output, 1, "analyze with a missing wav");

    let records = video_records(dir.path(), "reports.jsonl");
    assert_eq!(records.len(), 20);
    for record in &records {
        if record["video_id"] == "clip-07" {
            assert_eq!(record["status"], "failed", "{record}");
            let error = record["error"].as_str().unwrap();
            assert!(error.contains("clip-07.wav"), "error does not name the input: {error}");
            assert!(record.get("level").is_none(), "failed record carries a label: {record}");
        } else {
            assert_eq!(record["status"], "ok", "{record}");
        }
    }

    let output = newstension(
        dir.path(),
        &[
            "evaluate",
            "--reports",
            "reports.jsonl",
            "--annotations",
            "annotations.csv",
            "--out",
            "eval.jsonl",
        ],
    );
    expect_code(&output, 0, "evaluate after partial failure");
    let eval = std::fs::read_to_string(dir.path().join("eval.jsonl")).unwrap();
    let header: serde_json::Value = serde_json::from_str(eval.lines().next().unwrap()).unwrap();
    assert_eq!(header["record"], "evaluation");
    assert_eq!(header["videos_failed"], 1, "{header}");
    assert_eq!(header["videos_evaluated"], 19, "{header}");
    // clip-07 had a 3-of-4 majority, so the gold set shrinks by one
    // while the unanimous subset is untouched.
    assert_eq!(header["gold_videos"], 17, "{header}");
    assert_eq!(header["concordant_videos"], 12, "{header}");
}

/// A typo in the configuration is a usage error: exit 2 and no report.
#[test]
fn unknown_config_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    std::fs::write(dir.path().join("typo.toml"), "[prosody]\nhopp_s = 0.02\n").unwrap();

    let output = analyze(dir.path(), "typo.toml", "reports.jsonl");
    expect_code(&output, 2, "analyze with unknown config key");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("hopp_s"), "stderr does not name the bad key:\n{stderr}");
    assert!(!dir.path().join("reports.jsonl").exists(), "report written despite config error");
}

/// Out-of-range parameter values are rejected with the section named.
#[test]
fn invalid_config_value_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    std::fs::write(dir.path().join("bad.toml"), "[fusion]\nweight_floor = 1.5\n").unwrap();

    let output = analyze(dir.path(), "bad.toml", "reports.jsonl");
    expect_code(&output, 2, "analyze with out-of-range weight_floor");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("[fusion]"), "stderr does not name the section:\n{stderr}");
}

/// A missing manifest is a usage error for the whole run.
#[test]
fn missing_manifest_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let output = newstension(
        dir.path(),
        &["analyze", "--manifest", "absent.jsonl", "--config", "config.toml", "--out", "r.jsonl"],
    );
    expect_code(&output, 2, "analyze with missing manifest");
}

/// Annotation labels outside {low, high} abort evaluation with the
/// offending row named.
#[test]
fn bad_annotation_label_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let output = analyze(dir.path(), "config.toml", "reports.jsonl");
    expect_code(&output, 0, "analyze");

    std::fs::write(
        dir.path().join("annotations.csv"),
        "video_id,annotator_id,label\nclip-01,ann-1,medium\n",
    )
    .unwrap();
    let output = newstension(
        dir.path(),
        &[
            "evaluate",
            "--reports",
            "reports.jsonl",
            "--annotations",
            "annotations.csv",
            "--out",
            "eval.jsonl",
        ],
    );
    expect_code(&output, 2, "evaluate with a bad label");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("medium"), "stderr does not quote the bad label:\n{stderr}");
}

/// A custom lexicon directory extends the ensemble; relative paths
/// resolve against the configuration file.
#[test]
fn custom_lexicon_extends_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    let lexicon = dir.path().join("lex/crisis-terms");
    std::fs::create_dir_all(&lexicon).unwrap();
    std::fs::write(lexicon.join("positive.txt"), "ceasefire\nrebuilt\n").unwrap();
    std::fs::write(lexicon.join("negative.txt"), "bloodshed\nlooting\n").unwrap();
    std::fs::write(
        dir.path().join("custom.toml"),
        "[sentiment]\nscorers = [\"general\", \"news-tone\", \"crisis-terms\"]\n\
         lexicon_dirs = [\"lex/crisis-terms\"]\n",
    )
    .unwrap();

    let output = analyze(dir.path(), "custom.toml", "reports.jsonl");
    expect_code(&output, 0, "analyze with custom lexicon");
    let first = std::fs::read_to_string(dir.path().join("reports.jsonl")).unwrap();
    let header: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(header["record"], "run");
    assert_eq!(header["ensemble_size"], 3, "{header}");
    assert_eq!(header["scorers"][2], "crisis-terms", "{header}");
}

/// Worker count is an execution knob, not a result knob: video records
/// are identical between a serial and a parallel run.
#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path());
    std::fs::write(dir.path().join("serial.toml"), "[run]\nworkers = 1\n").unwrap();
    std::fs::write(dir.path().join("parallel.toml"), "[run]\nworkers = 4\n").unwrap();

    expect_code(&analyze(dir.path(), "serial.toml", "serial.jsonl"), 0, "serial analyze");
    expect_code(&analyze(dir.path(), "parallel.toml", "parallel.jsonl"), 0, "parallel analyze");

    // Headers record the differing configuration; the per-video lines
    // must match byte for byte.
    let serial = video_records(dir.path(), "serial.jsonl");
    let parallel = video_records(dir.path(), "parallel.jsonl");
    assert_eq!(serial.len(), 20);
    assert_eq!(serial, parallel);
}
