//! End-to-end tests of the command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ltl-learn"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const P_SAMPLE: &str = ".props: p\n.positive:\n|1\n.negative:\n|0\n";
const XP_FP_SAMPLE: &str = ".props: p\n.positive:\n0|1\n.negative:\n|0\n";

#[test]
fn learn_prints_formula_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", P_SAMPLE);
    let out = bin().args(["learn", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("formula := p\n"), "got: {text}");
    assert!(text.contains("size := 1\n"), "got: {text}");
}

#[test]
fn learn_count_two_reports_both_minimal_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", XP_FP_SAMPLE);
    let out = bin()
        .args(["learn", "--count", "2", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("formula := (X p)"), "got: {text}");
    assert!(text.contains("formula := (F p)"), "got: {text}");
    assert!(text.contains("size := 2"), "got: {text}");
}

#[test]
fn exhausted_size_budget_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", XP_FP_SAMPLE);
    let out = bin()
        .args(["learn", "--max-size", "1", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("size"), "got: {}", stderr(&out));
}

#[test]
fn malformed_sample_exits_1_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "bad.trace", ".props: p\n.positive:\n10|1\n");
    let out = bin().args(["learn", "--input"]).arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "got: {}", stderr(&out));
}

#[test]
fn missing_input_file_exits_1() {
    let out = bin()
        .args(["learn", "--input", "/nonexistent/nope.trace"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_prints_one_valuation_per_word() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        dir.path(),
        "s.trace",
        ".props: p0\n.positive:\n|0\n0;1|0\n.negative:\n|1\n",
    );
    let out = bin()
        .args(["eval", "--formula", "G (! p0)", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "true\nfalse\nfalse\n");
}

#[test]
fn eval_rejects_bad_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", P_SAMPLE);
    let out = bin()
        .args(["eval", "--formula", "p U", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("syntax error"));
}

#[test]
fn learn_dt_reports_primitives_tree_and_formula() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        dir.path(),
        "s.trace",
        ".props: p0\n.positive:\n|0\n0|0;0\n.negative:\n|1\n1|0\n",
    );
    let out = bin()
        .args(["learn-dt", "--seed", "7", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("primitive := "), "got: {text}");
    assert!(text.contains("tree :="), "got: {text}");
    assert!(text.contains("formula := "), "got: {text}");
    assert!(text.contains("inner_nodes := "), "got: {text}");
}

#[test]
fn identical_invocations_produce_identical_output_modulo_times() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", XP_FP_SAMPLE);
    let run = || {
        let out = bin()
            .args(["learn", "--count", "3", "--stats", "json-lines", "--input"])
            .arg(&input)
            .output()
            .unwrap();
        assert!(out.status.success());
        // timing fields vary run to run; strip them before comparing
        stdout(&out)
            .lines()
            .map(|line| match serde_json::from_str::<serde_json::Value>(line) {
                Ok(mut v) => {
                    v.as_object_mut().unwrap().remove("seconds");
                    v.to_string()
                }
                Err(_) => line.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn gen_writes_readable_deterministic_samples_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("bench");
    let run = |sub: &str| {
        let out = bin()
            .args([
                "gen",
                "--pattern",
                "1",
                "--sizes",
                "8",
                "--seeds",
                "5",
                "--output",
            ])
            .arg(dir.path().join(sub))
            .output()
            .unwrap();
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    };
    run("bench");
    run("bench2");
    let file = out_dir.join("pattern1-size8-seed5.trace");
    let bytes1 = std::fs::read(&file).unwrap();
    let bytes2 = std::fs::read(dir.path().join("bench2/pattern1-size8-seed5.trace")).unwrap();
    assert_eq!(bytes1, bytes2, "same seed must give identical bytes");

    let manifest = std::fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("(G (! p0))\t8\t5\tpattern1-size8-seed5.trace"));

    // the generated file is valid input for learn
    let out = bin().args(["learn", "--input"]).arg(&file).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("size := "));
}

#[test]
fn export_cnf_writes_a_dimacs_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", P_SAMPLE);
    let cnf = dir.path().join("out.cnf");
    let out = bin()
        .args(["export-cnf", "--size", "2", "--input"])
        .arg(&input)
        .arg("--output")
        .arg(&cnf)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&cnf).unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf ")).unwrap();
    assert!(header.split_whitespace().count() == 4);
    assert!(text.lines().any(|l| l.starts_with("c x 1 p ")));
}

#[test]
fn ops_flag_restricts_the_search_space() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", XP_FP_SAMPLE);
    let out = bin()
        .args(["learn", "--ops", "F", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("formula := (F p)"));
}

#[test]
fn external_dimacs_solver_is_spawned_and_parsed() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", P_SAMPLE);

    // a stub that always answers UNSAT: learn must walk the whole staircase
    // and exit 2 with the budget diagnostic
    let solver = write_file(dir.path(), "unsat.sh", "#!/bin/sh\necho \"s UNSATISFIABLE\"\n");
    let mut perms = std::fs::metadata(&solver).unwrap().permissions();
    use std::os::unix::fs::PermissionsExt;
    perms.set_mode(0o755);
    std::fs::set_permissions(&solver, perms).unwrap();

    let out = bin()
        .args(["learn", "--max-size", "2"])
        .arg("--solver")
        .arg(format!("dimacs:{}", solver.display()))
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("verdict=unsat"));

    // a stub that talks gibberish is a protocol error
    let bad = write_file(dir.path(), "bad.sh", "#!/bin/sh\necho \"hello\"\n");
    let mut perms = std::fs::metadata(&bad).unwrap().permissions();
    perms.set_mode(0o755);
    std::fs::set_permissions(&bad, perms).unwrap();
    let out = bin()
        .args(["learn"])
        .arg("--solver")
        .arg(format!("dimacs:{}", bad.display()))
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("protocol"), "got: {}", stderr(&out));

    // a missing solver binary is a launch error
    let out = bin()
        .args(["learn", "--solver", "dimacs:/nonexistent/solver", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_solver_flag_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "s.trace", P_SAMPLE);
    let out = bin()
        .args(["learn", "--solver", "z3", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shipped_leader_election_sample_learns_the_commit_explanation() {
    let sample = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples/leader-election.trace");
    let out = bin()
        .args(["learn", "--count", "10", "--input"])
        .arg(&sample)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("size := 4"), "got: {text}");
    assert!(
        text.contains("formula := ((! recv_2_1) U comm_1)"),
        "the until explanation should be among the minimal formulas, got: {text}"
    );
}
