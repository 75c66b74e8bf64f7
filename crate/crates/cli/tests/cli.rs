use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn hdlang(args: &[&str]) -> Output {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hdlang"))
        .args(args)
        .env_remove("HDLANG_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn desk() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/desk")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Trains a small model on the desk corpus and returns its path.
fn train(dir: &Path, n: &str, dim: &str) -> PathBuf {
    train_as(dir, &format!("n{n}.hdlm"), n, dim)
}

fn train_as(dir: &Path, file: &str, n: &str, dim: &str) -> PathBuf {
    let model = dir.join(file);
    let out = hdlang(&[
        "train",
        "--corpus",
        s(&desk().join("train")),
        "--n",
        n,
        "--dim",
        dim,
        "--model",
        s(&model),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    model
}

#[test]
fn train_lists_languages_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = train(dir.path(), "3", "2000");
    let model = hdlang::format::load_model(&a).unwrap();
    assert!(model.languages().len() >= 5);
    assert_eq!(model.config().n, 3);

    let b = train_as(dir.path(), "again.hdlm", "3", "2000");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn odd_dimension_is_a_usage_error() {
    let out = hdlang(&["train", "--corpus", "x", "--dim", "10001", "--model", "m"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn missing_corpus_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdlang(&[
        "train",
        "--corpus",
        s(&dir.path().join("nope")),
        "--model",
        s(&dir.path().join("m.hdlm")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn detect_query_and_similarity() {
    let dir = tempfile::tempdir().unwrap();
    let model = train(dir.path(), "4", "4000");

    let out = run_with_stdin(
        &["detect", "--model", s(&model)],
        Some("the file could not be saved because the disk is full\n"),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("eng:"), "{first}");
    assert_eq!(first.split('\t').count(), 3);

    let out = run_with_stdin(
        &["detect", "--model", s(&model), "--top", "1"],
        Some("bitte geben sie einen gültigen namen ein\n?!\n"),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert_eq!(text.lines().next().unwrap().split('\t').count(), 1);
    assert!(text.starts_with("deu:"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let out = run_with_stdin(&["detect", "--model", s(&model)], Some(""));
    assert_eq!(out.status.code(), Some(1));
    let out = run_with_stdin(&["detect", "--model", s(&model), "--top", "0"], Some("x"));
    assert_eq!(out.status.code(), Some(2));

    let out = hdlang(&[
        "query",
        "--model",
        s(&model),
        "--lang",
        "eng",
        "--context",
        "the",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("<space>\t"), "{text}");
    let out = hdlang(&[
        "query",
        "--model",
        s(&model),
        "--lang",
        "eng",
        "--context",
        "th",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let csv = dir.path().join("sim.csv");
    let out = hdlang(&["similarity", "--model", s(&model), "--out", s(&csv)]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(csv).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let k = rows[0].len();
    assert!(k >= 5);
    assert_eq!(rows.len(), k + 1);
    for i in 0..k {
        assert_eq!(rows[i + 1][i], "1");
    }
}

#[test]
fn eval_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let model = train(dir.path(), "3", "2000");
    let out_dir = dir.path().join("eval");
    let out = hdlang(&[
        "eval",
        "--model",
        s(&model),
        "--test",
        s(&desk().join("test")),
        "--out",
        s(&out_dir),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(out_dir.join("confusion.csv")).unwrap();
    assert!(csv.starts_with("truth,"));
    assert!(csv.lines().next().unwrap().ends_with(",skipped"));
    assert!(out_dir.join("confusion.txt").exists());
    assert!(std::fs::read_to_string(out_dir.join("report.txt"))
        .unwrap()
        .contains("accuracy"));
}

#[test]
fn sweep_accuracy_rises_with_block_size() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = hdlang(&[
        "sweep",
        "--train",
        s(&desk().join("train")),
        "--test",
        s(&desk().join("test")),
        "--n-list",
        "1,2,3",
        "--dim",
        "4000",
        "--out",
        s(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(csv).unwrap();
    let acc: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(acc.len(), 3);
    assert!(acc[0] < acc[1] && acc[1] < acc[2], "{acc:?}");

    let same = hdlang(&[
        "sweep",
        "--train",
        s(&desk().join("test")),
        "--test",
        s(&desk().join("test")),
        "--n-list",
        "1",
        "--dim",
        "100",
    ]);
    assert_eq!(same.status.code(), Some(1));
}

#[test]
fn bench_enforces_minimum_length() {
    let out = hdlang(&["bench", "--chars", "10"]);
    assert_eq!(out.status.code(), Some(2));
}
