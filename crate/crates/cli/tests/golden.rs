//! Runs every case in `fixtures/expected/cases.txt` through the binary and
//! compares stdout byte for byte with `fixtures/expected/<case>.out`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn sr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sr")).args(args).current_dir(root()).output().unwrap()
}

fn sr_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sr")).args(args).env(key, val).current_dir(root()).output().unwrap()
}

#[test]
fn fixture_outputs_match() {
    let cases = std::fs::read_to_string(root().join("fixtures/expected/cases.txt")).unwrap();
    let mut failures = Vec::new();
    let mut count = 0;
    for line in cases.lines().filter(|l| !l.trim().is_empty()) {
        let parts: Vec<&str> = line.split('|').collect();
        let (name, code, args) = (parts[0], parts[1].parse::<i32>().unwrap(), &parts[2..]);
        let want = std::fs::read_to_string(root().join(format!("fixtures/expected/{name}.out"))).unwrap();
        let out = sr(args);
        let got = String::from_utf8(out.stdout).unwrap();
        if got != want || out.status.code() != Some(code) {
            failures.push(format!("{name}: exit {:?} (want {code})\n--- got\n{got}--- want\n{want}", out.status.code()));
        }
        count += 1;
    }
    assert!(count >= 20, "only {count} cases");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn eval_prints_the_unrolled_formula() {
    let out = sr(&["eval", "phat(X;3)", "--theory", "fixtures/omegaiotao.sr"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "Q(f(f(X(2\u{304}))),Y(2\u{304})) ∨ Q(f(X(1\u{304})),Y(1\u{304})) ∨ Q(X(0\u{304}),Y(0\u{304})) ∨ ¬P(X(0\u{304}))\n"
    );
}

#[test]
fn unify_prints_the_worked_unifier() {
    let out = sr(&["unify", "fixtures/ual_example.sr"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{u←f\u{302}(x,y,n,m), z←g\u{302}(v,n)}\n");
    let out = sr(&["--ascii", "unify", "fixtures/ual_example.sr"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{u <- ^f(x, y; n, m), z <- ^g(v; n)}\n");
}

#[test]
fn ascii_bottom_is_bot() {
    let out = sr(&["--ascii", "unify", "fixtures/unifalg.sr"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("BOT"));
}

#[test]
fn verify_grid_exits_zero() {
    let out = sr(&["verify", "fixtures/ex_proofschema.sr", "--n", "0..5", "--m", "0..3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().filter(|l| l.ends_with(": unsat")).count(), 24);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sr(&["eval"]).status.code(), Some(2));
    assert_eq!(sr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sr(&["unify", "fixtures/uniform.sr", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(sr(&["unify", "fixtures/does_not_exist.sr"]).status.code(), Some(2));
    assert_eq!(sr(&["unify", "fixtures/uniform.sr", "--name", "nope"]).status.code(), Some(2));
    assert_eq!(sr(&["eval", "fn", "--theory", "fixtures/termschema.sr"]).status.code(), Some(2));
    assert_eq!(sr(&["eval", "^f(x;", "--theory", "fixtures/termschema.sr"]).status.code(), Some(2));
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = std::env::temp_dir().join(format!("sr-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.sr");
    std::fs::write(&f, "param n\nclass X[n];\n").unwrap();
    let out = sr(&["check", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2:1"), "{err}");
}

#[test]
fn recursion_bound_from_environment() {
    let args = ["instantiate", "fixtures/ex_proofschema.sr", "--set", "n=3", "--set", "m=0"];
    assert_eq!(sr_env(&args, "SR_RECURSION_BOUND", "2").status.code(), Some(1));
    assert_eq!(sr_env(&args, "SR_RECURSION_BOUND", "3").status.code(), Some(0));
    let mut flagged = vec!["--bound", "2"];
    flagged.extend(args);
    assert_eq!(sr_env(&flagged, "SR_RECURSION_BOUND", "100").status.code(), Some(1));
}

#[test]
fn composition_flag_changes_nothing_on_disjoint_copies() {
    let base = ["herbrand", "fixtures/ex_proofschema.sr", "--set", "n=2", "--set", "m=1"];
    let mut lit = base.to_vec();
    lit.push("--literal");
    assert_eq!(sr(&base).stdout, sr(&lit).stdout);
}

#[test]
fn tree_format_is_tab_separated() {
    let out = sr(&["--format", "tree", "instantiate", "fixtures/ex_proofschema.sr", "--set", "n=0", "--set", "m=0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 3));
    assert!(text.starts_with("0\tres"));
}
