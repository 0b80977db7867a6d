//! The `readkb` binary end to end.

mod common;

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use common::{corpus_dir, corpus_files};

fn readkb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_readkb"))
        .args(args)
        .env_remove("READKB_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ingest(kb: &Path, articles: &[&Path]) -> Output {
    let mut args = vec![
        "ingest".to_string(),
        "--kb".into(),
        kb.display().to_string(),
        "--article".into(),
    ];
    args.extend(articles.iter().map(|p| p.display().to_string()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    readkb(&args)
}

#[test]
fn ingest_then_ask() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("kb.txt");
    let birds = corpus_dir().join("birds.txt");
    let o = ingest(&kb, &[&birds]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains("selected"), "{out}");
    assert!(out.contains("birds.txt"), "{out}");

    let o = readkb(&[
        "ask",
        "Which birds eat nectar?",
        "--kb",
        kb.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "hummingbird ingest nectar");

    let o = readkb(&[
        "ask",
        "Do birds eat gravel?",
        "--kb",
        kb.to_str().unwrap(),
        "--explain",
    ]);
    assert!(stdout(&o).starts_with("yes"), "{}", stdout(&o));
    assert!(stdout(&o).contains("  | "), "{}", stdout(&o));
}

#[test]
fn dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("kb.txt");
    let files = corpus_files();
    let refs: Vec<&Path> = files.iter().map(|p| p.as_path()).collect();
    let o = ingest(&kb, &refs);
    assert!(o.status.success(), "{o:?}");
    assert!(
        stdout(&o).lines().any(|l| l.starts_with("total")),
        "{}",
        stdout(&o)
    );

    let saved = std::fs::read_to_string(&kb).unwrap();
    let golden = std::fs::read_to_string(common::golden_dump_path()).unwrap();
    assert_eq!(saved, golden);

    let again = dir.path().join("again.txt");
    let o = readkb(&[
        "dump",
        "--kb",
        kb.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(saved, std::fs::read_to_string(&again).unwrap());
    let o = readkb(&["dump", "--kb", again.to_str().unwrap()]);
    assert_eq!(saved, stdout(&o));

    let o = readkb(&["check", "--kb", kb.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "ok");
}

#[test]
fn failed_parses_are_counted_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("birds.txt");
    std::fs::write(&bad, "Birds eat seeds.\nEat birds the of quickly seeds.\n").unwrap();
    let o = readkb(&["ingest", "--article", bad.to_str().unwrap(), "-v"]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert!(out.contains("parse-failed"), "{out}");
    assert!(out.lines().any(|l| l.contains("ok ")), "{out}");
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("kb.txt");
    std::fs::write(&kb, "concept bird parent nothing-here\nnonsense line\n").unwrap();
    let o = readkb(&["ask", "Do birds eat seeds?", "--kb", kb.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let missing = dir.path().join("missing.txt");
    let o = readkb(&["ingest", "--article", missing.to_str().unwrap()]);
    assert!(!o.status.success());
    let o = readkb(&[
        "ingest",
        "--topic",
        "weather",
        "--article",
        corpus_dir().join("bats.txt").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
}

#[test]
fn repl_answers_until_quit() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_readkb"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"Do bats eat blood?\nzzz?\n:quit\nDo birds eat seeds?\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("I don't know"), "{out}");
    assert!(out.contains("I can't parse that question."), "{out}");
    assert_eq!(out.matches("> ").count(), 3, "{out}");
}

#[test]
fn interpret_prints_the_clauses() {
    let o = readkb(&[
        "interpret",
        "The crowned eagle of Africa lives in the rain forests and eats monkeys.",
        "--class",
        "eagle",
    ]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o).to_lowercase();
    for w in [
        "(verbal-concept live)",
        "(verbal-concept ingest)",
        "(attach-to verb) (location-r)",
        "(attach-to crowned-eagle) (inhabit)",
        "(q all)",
        "(q ?)",
    ] {
        assert!(out.contains(w), "{w}\n{out}");
    }
}
