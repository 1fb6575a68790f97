use std::path::PathBuf;
use std::process::{Command, Output};

use freeze_core::ara::{parse_automaton, run_exists};
use freeze_core::DataWord;

fn corpus(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect()
}

fn freeze(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeze"))
        .args(args)
        .current_dir(corpus(""))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_reports_the_rejection_pattern() {
    let o = freeze(&["run", "--automaton", "acb.ara", "--word", "a@0 c@1 b@0"]);
    assert_eq!(stdout(&o), "NO\n");
    assert_eq!(o.status.code(), Some(1));
    let o = freeze(&["run", "--automaton", "example.ltl", "--word", "a@0 c@1 b@1"]);
    assert_eq!(stdout(&o), "YES\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn run_matches_the_library() {
    let a = parse_automaton(&std::fs::read_to_string(corpus("acb.ara")).unwrap()).unwrap();
    for text in ["a@0", "a@0 b@0", "a@0 c@0 b@0", "c@0 a@1 c@0 b@1", "a@0 c@1 c@2 b@0"] {
        let w = DataWord::parse(text, a.alphabet()).unwrap();
        let expected = if run_exists(&a, &w).unwrap() { "YES\n" } else { "NO\n" };
        assert_eq!(stdout(&freeze(&["run", "--automaton", "acb.ara", "--word", text])), expected, "{text}");
    }
}

#[test]
fn bound_prints_exact_values() {
    let o = freeze(&["bound", "--machine", "single.cm"]);
    assert_eq!(stdout(&o), "alpha_0 = 1\nU_0 = 1\nalpha_1 = 2\nU_1 = 3\nm = 12\n");
    assert_eq!(o.status.code(), Some(0));
    let o = freeze(&["--format", "json", "bound", "--machine", "single.cm"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["m"], "12");
    assert_eq!(v["u"][1], "3");
}

#[test]
fn inclusion_verdicts() {
    let o = freeze(&["refine", "--lhs", "example.ltl", "--rhs", "example.ltl"]);
    assert_eq!(stdout(&o), "INCLUDED\n");
    assert_eq!(o.status.code(), Some(0));
    let o = freeze(&["include", "--lhs", "top.ltl", "--rhs", "acb.ara"]);
    assert_eq!(stdout(&o), "NOT_INCLUDED\n");
    assert_eq!(o.status.code(), Some(1));
    let o = freeze(&["--format", "json", "include", "--lhs", "acb.ara", "--rhs", "top.ltl"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["verdict"], "INCLUDED");
    assert_eq!(v["command"], "include");
}

#[test]
fn nonemptiness_verdicts() {
    let o = freeze(&["sat", "--automaton", "acb.ara"]);
    assert!(stdout(&o).starts_with("NONEMPTY\n"));
    assert_eq!(o.status.code(), Some(0));
    let o = freeze(&["sat", "--machine", "single.cm", "--cap", "100", "--vcap", "5"]);
    assert!(stdout(&o).starts_with("UNKNOWN\n"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn artifacts_round_trip() {
    let o = freeze(&["parse", "example.ltl"]);
    assert_eq!(stdout(&o), "alphabet: a b c\nG (b | c | down X G (a | b | X G (a | c | nup)))\n");
    let ara = stdout(&freeze(&["ltl2ara", "example.ltl"]));
    assert_eq!(parse_automaton(&ara).unwrap().state_count(), 3);
    let cm = freeze(&["ara2cm", "fresh.ara"]);
    assert_eq!(cm.status.code(), Some(0));
    assert!(freeze_core::ipcant::parse_machine(&stdout(&cm)).is_ok());
    let tm = stdout(&freeze(&["tmgen", "--machine", "bounce.tm", "--steps", "1"]));
    let f = freeze_core::ltl::parse_ltl_file(&tm).unwrap();
    assert_eq!(f.alphabet.len(), 10);
    assert!(tm.lines().last().unwrap().starts_with("# run: p@0 "));
}

#[test]
fn oracle_agrees() {
    let o = freeze(&["oracle", "--automaton", "acb.ara", "--max-length", "3"]);
    assert!(stdout(&o).starts_with("AGREE"));
    assert_eq!(o.status.code(), Some(0));
    let o = freeze(&["oracle", "--automaton", "acb.ara", "--max-length", "9"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn error_exit_codes() {
    assert_eq!(freeze(&["frob"]).status.code(), Some(64));
    assert_eq!(freeze(&["sat", "--automaton", "acb.ara", "--cap", "0"]).status.code(), Some(64));
    assert_eq!(freeze(&["run", "--automaton", "missing.ara", "--word", "a@0"]).status.code(), Some(64));
    let o = freeze(&["run", "--automaton", "acb.ara", "--word", "z@0"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(!o.stderr.is_empty());
    assert_eq!(freeze(&["parse", "bounce.tm", "--format", "json"]).status.code(), Some(0));
    assert_eq!(freeze(&["bound", "--machine", "acb.ara"]).status.code(), Some(65));
    assert_eq!(freeze(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "include", "--lhs", "example.ltl", "--rhs", "acb.ara"];
    assert_eq!(freeze(&args).stdout, freeze(&args).stdout);
    let args = ["ara2cm", "acb.ara"];
    assert_eq!(freeze(&args).stdout, freeze(&args).stdout);
}
