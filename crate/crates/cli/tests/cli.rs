use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use corec::synth::{fs_scenario, mining_corpus, planted_repository, write_repository, SynthCommit};
use tempfile::TempDir;

fn corec(args: &[&str], repos: &[&Path], out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_corec"));
    for r in repos {
        cmd.arg("--repo").arg(r);
    }
    cmd.arg("--out").arg(out).args(args).output().expect("corec runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn repo(dir: &TempDir, name: &str, commits: &[SynthCommit]) -> PathBuf {
    let path = dir.path().join(name);
    write_repository(&path, commits).unwrap();
    path
}

#[test]
fn mine_reports_planted_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = repo(&dir, "corpus", &mining_corpus());
    let out = dir.path().join("out");
    let o = corec(&["mine"], &[&corpus], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("corpus: 14 keyword commits"), "{text}");
    let ids: Vec<&str> = text.lines().skip(1).take(3).map(|l| l.trim().split('\t').next().unwrap()).collect();
    assert_eq!(ids, ["P1", "P2", "P3"]);
    for f in ["commits.tsv", "entities.txt", "edits.tsv", "cdgs.txt", "matches.tsv", "history.tsv", "rcps.tsv"] {
        assert!(out.join("corpus").join(f).is_file(), "{f}");
    }
}

#[test]
fn mine_empty_repository_and_reject_non_repository() {
    let dir = tempfile::tempdir().unwrap();
    let empty = repo(&dir, "empty", &[]);
    let out = dir.path().join("out");
    let o = corec(&["mine"], &[&empty], &out);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("empty: 0 keyword commits, 0 recurring patterns"));

    let plain = dir.path().join("plain");
    std::fs::create_dir(&plain).unwrap();
    assert!(!corec(&["mine"], &[&plain], &out).status.success());
    assert!(!corec(&["mine"], &[], &out).status.success());
}

#[test]
fn train_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let planted = repo(&dir, "planted", &planted_repository().commits);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["--trees", "20", "train"];
    assert!(corec(&args, &[&planted], &a).status.success());
    assert!(corec(&args, &[&planted], &b).status.success());
    for p in ["P1", "P2", "P3"] {
        let name = format!("models/{p}.model");
        let first = std::fs::read(a.join(&name)).unwrap();
        assert_eq!(first, std::fs::read(b.join(&name)).unwrap(), "{p}");
        assert!(a.join(format!("models/{p}.features.csv")).is_file());
    }

    let u = dir.path().join("u");
    let o = corec(&["--trees", "20", "--unified", "train"], &[&planted], &u);
    assert!(o.status.success());
    let models: Vec<_> = std::fs::read_dir(u.join("models"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".model"))
        .collect();
    assert_eq!(models, ["unified.model"]);
}

#[test]
fn train_without_matches_fails() {
    let dir = tempfile::tempdir().unwrap();
    let empty = repo(&dir, "empty", &[]);
    assert!(!corec(&["train"], &[&empty], &dir.path().join("out")).status.success());
}

#[test]
fn recommend_the_missed_sibling() {
    let dir = tempfile::tempdir().unwrap();
    let planted = repo(&dir, "planted", &planted_repository().commits);
    let fs = repo(&dir, "fs", &fs_scenario());
    let out = dir.path().join("out");
    assert!(corec(&["train"], &[&planted], &out).status.success());

    let o = corec(&["recommend", "HEAD"], &[&fs], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("  recommend lib.fs.fs.read ")), "{text}");

    let o = corec(&["recommend", "HEAD~1"], &[&fs], &out);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "no recommendation basis\n");

    assert!(!corec(&["recommend", "0123456789abcdef"], &[&fs], &out).status.success());
}

#[test]
fn evaluate_selected_tools() {
    let dir = tempfile::tempdir().unwrap();
    let planted = repo(&dir, "planted", &planted_repository().commits);
    let out = dir.path().join("out");
    let o = corec(&["--tools", "rose", "evaluate"], &[&planted], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let tools: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(tools.len(), 6);
    assert!(tools.iter().all(|t| *t == "ROSE"));
    assert!(out.join("report.txt").is_file());
    assert!(!corec(&["--tools", "nope", "evaluate"], &[&planted], &out).status.success());
}
