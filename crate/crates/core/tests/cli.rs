// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use weihrauch_steps::cli::{run_cli, EXIT_OTHER, EXIT_PARSE, EXIT_PASS};
use weihrauch_steps::truthtable::{TruthTable, Vertex};

fn wsteps(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("wsteps").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_figure_two() {
    let ones = ["111", "110", "011", "100", "001"];
    let t = TruthTable::from_fn(3, |u| ones.iter().any(|s| s.parse::<Vertex>().unwrap() == u)).unwrap();
    let (code, out, _) = wsteps(&["analyze", &t.to_inline()]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("n=3 l=3 complete=yes homogeneous=no\n"), "{out}");
    assert!(out.contains("chain="));
}

#[test]
fn analyze_small_tables() {
    let (_, out, _) = wsteps(&["analyze", "2:0111"]);
    assert!(out.starts_with("n=2 l=1 "), "{out}");
    let (_, out, _) = wsteps(&["analyze", "2:0000"]);
    assert!(out.starts_with("n=2 l=0 "), "{out}");
    let (_, out, _) = wsteps(&["analyze", "3:01101001"]);
    assert!(out.contains("level_word=0101"), "{out}");
}

#[test]
fn analyze_reads_files_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("or.txt");
    std::fs::write(&f, TruthTable::or2().to_text()).unwrap();
    let (code, out, _) = wsteps(&["--dot", "analyze", path(&f)]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("n=2 l=1 "));
    assert!(out.contains("digraph hypercube {"));
}

#[test]
fn bad_table_is_parse_error() {
    let (code, _, err) = wsteps(&["analyze", "2:011"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.starts_with("error:"));
}

#[test]
fn normalize_prints_flips_and_endpoint() {
    let (code, out, _) = wsteps(&["normalize", "3:00010111"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("negated="));
    assert!(out.contains(&TruthTable::top_alternating(3, 1).unwrap().to_text()), "{out}");
}

#[test]
fn compile_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w.cert");
    let (code, _, err) = wsteps(&["--out", path(&cert), "compile", "2:0111", "2:0001"]);
    assert_eq!(code, EXIT_PASS, "{err}");
    let (code, out, _) = wsteps(&["verify", path(&cert)]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let (code, out, _) = wsteps(&["verify", "--json", path(&cert)]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
}

#[test]
fn one_dimensional_verify_runs_boundary_check() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w.cert");
    wsteps(&["--out", path(&cert), "compile", "--alpha", "0(1)", "1:01", "1:10"]);
    let (code, out, _) = wsteps(&["verify", "--json", path(&cert)]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["boundary"]["status"], "pass");
}

#[test]
fn compile_refuses_larger_source() {
    let (code, out, err) = wsteps(&["compile", "2:1001", "2:0001"]);
    assert_eq!(code, EXIT_OTHER);
    assert!(out.is_empty());
    assert!(err.contains("l(source)=2 > l(target)=1"), "{err}");
}

#[test]
fn truncated_certificate_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("negated_post.cert")).unwrap();
    let cert = dir.path().join("cut.cert");
    std::fs::write(&cert, &text[..text.len() / 2]).unwrap();
    let (code, _, _) = wsteps(&["verify", path(&cert)]);
    assert_eq!(code, EXIT_PARSE);
}

#[test]
fn wrong_certificate_fails() {
    let (code, out, _) = wsteps(&["verify", path(&fixture("negated_post.cert"))]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn same_seed_same_output() {
    let cert = fixture("projection_fake.cert");
    let a = wsteps(&["--seed", "7", "verify", path(&cert)]);
    let b = wsteps(&["--seed", "7", "verify", path(&cert)]);
    assert_eq!(a, b);
}

#[test]
fn injury_and_diag_on_fixtures() {
    let (code, out, _) = wsteps(&["injury", "--stages", "200", path(&fixture("opponents_basic.txt"))]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("stage="), "{out}");
    let (code, out, _) = wsteps(&["diag", "--stages", "4", path(&fixture("quadruples.txt"))]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("note:"), "{out}");
}

#[test]
fn missing_file_is_other_error() {
    let (code, _, err) = wsteps(&["injury", "/nonexistent/opponents.txt"]);
    assert_eq!(code, EXIT_OTHER);
    assert!(err.contains("/nonexistent/opponents.txt"));
}
