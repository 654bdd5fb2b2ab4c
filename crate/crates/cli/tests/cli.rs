//! End-to-end tests against the built binary: exit codes, report fields,
//! and a search → serialize → parse → verify → fingerprint round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn steiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn admissible_pass_and_fail_exit_codes() {
    let ok = steiner(&["admissible", "--k", "3", "--v", "7"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert_eq!(field(&text, "admissible"), Some("true"));
    assert_eq!(field(&text, "r"), Some("3"));
    assert_eq!(field(&text, "b"), Some("7"));
    assert!(field(&text, "wall_ms").is_some());

    let bad = steiner(&["admissible", "--k", "3", "--v", "8"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(field(&stdout(&bad), "admissible"), Some("false"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(steiner(&["admissible", "--k", "3"]).status.code(), Some(2));
    assert_eq!(steiner(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(steiner(&[]).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_runtime_error() {
    let out = steiner(&["verify", "/nonexistent/designs.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orbits_reports_group_facts() {
    let out = steiner(&["orbits", &fixture("sl23_28.gens")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "degree"), Some("28"));
    assert_eq!(field(&text, "order"), Some("24"));
    assert_eq!(field(&text, "orbits"), Some("24+1x4"));
}

#[test]
fn search_then_verify_then_fingerprint_round_trip() {
    let dir = std::env::temp_dir().join(format!("steiner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let designs = dir.join("z7.designs");

    let search = steiner(&["search", &fixture("z7.toml")]);
    assert_eq!(search.status.code(), Some(0));
    let text = stdout(&search);
    assert_eq!(field(&text, "exhaustive"), Some("true"));
    assert_eq!(field(&text, "solutions"), Some("2"));
    let lines: Vec<&str> = text
        .lines()
        .take_while(|l| !l.is_empty())
        .collect();
    assert_eq!(lines.len(), 2);
    std::fs::write(&designs, lines.join("\n")).unwrap();

    let verify = steiner(&["verify", designs.to_str().unwrap(), "--k", "3"]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(field(&stdout(&verify), "outcome"), Some("PASS"));

    // fingerprinting already-tokenized lines must agree with the tokens
    let fp = steiner(&["fingerprint", designs.to_str().unwrap()]);
    assert_eq!(fp.status.code(), Some(0));
    let fp_text = stdout(&fp);
    assert_eq!(field(&fp_text, "token_mismatches"), Some("0"));
    // and re-emitted lines are byte-identical to the search output
    let reemitted: Vec<&str> = fp_text.lines().take_while(|l| !l.is_empty()).collect();
    assert_eq!(reemitted, lines);

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn search_report_is_reproducible() {
    let a = stdout(&steiner(&["search", &fixture("z13.toml")]));
    let b = stdout(&steiner(&["search", &fixture("z13.toml")]));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("wall_ms="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(field(&a, "deterministic"), Some("seedless"));
}

#[test]
fn isomorphic_distinguishes_and_dumps() {
    let dir = std::env::temp_dir().join(format!("steiner-iso-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.designs");
    let b = dir.join("b.designs");
    let search = stdout(&steiner(&["search", &fixture("z7.toml")]));
    let mut lines = search.lines();
    std::fs::write(&a, lines.next().unwrap()).unwrap();
    std::fs::write(&b, lines.next().unwrap()).unwrap();

    let out = steiner(&["isomorphic", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "outcome"), Some("isomorphic"));

    let dumped = steiner(&[
        "isomorphic",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--dump",
    ]);
    assert_eq!(dumped.status.code(), Some(0));
    assert!(stdout(&dumped).contains("bijection:"));

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn construct_commands_emit_verified_output() {
    let td = steiner(&["construct", "td", "--k", "4", "--n", "5"]);
    assert_eq!(td.status.code(), Some(0));
    assert_eq!(field(&stdout(&td), "blocks"), Some("25"));

    let dir = std::env::temp_dir().join(format!("steiner-prod-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fano = dir.join("fano.designs");
    let search = stdout(&steiner(&["search", &fixture("z7.toml")]));
    std::fs::write(&fano, search.lines().next().unwrap()).unwrap();

    let prod = steiner(&["construct", "product", "--design", fano.to_str().unwrap(), "--k", "3"]);
    assert_eq!(prod.status.code(), Some(0));
    let text = stdout(&prod);
    assert_eq!(field(&text, "v"), Some("21"));
    assert_eq!(field(&text, "blocks"), Some("70"));
    assert_eq!(field(&text, "outcome"), Some("PASS"));

    std::fs::remove_dir_all(&dir).unwrap();
}
