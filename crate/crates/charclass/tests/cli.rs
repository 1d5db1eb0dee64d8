//! End-to-end tests of the command-line binary: contracted example outputs,
//! exit codes, JSON round-tripping, and byte-determinism of `verify-paper`.

use serde::Deserialize;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn lclass_table_contains_first_two_polynomials() {
    let out = run(&["lclass", "--max-degree", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1/3*p1"), "missing L_4 in:\n{}", text);
    assert!(
        text.contains("7/45*p2 - 1/45*p1^2"),
        "missing L_8 in:\n{}",
        text
    );
}

#[test]
fn splitting_obstruction_report_ends_with_verdict() {
    let out = run(&["steenrod", "--prop63", "--table", "paper-verbatim-p3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.trim_end()
            .ends_with("Q(u_-4) = u_-4*p1*p2; restriction = 0; splits: false"),
        "unexpected report:\n{}",
        text
    );
}

#[test]
fn primes_row_is_exact() {
    let out = run(&["primes", "--k", "1", "--bound", "20"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3 5 7 11 13 17 19\n");
}

#[test]
fn verify_paper_is_byte_deterministic_and_clean() {
    let a = run(&["verify-paper"]);
    let b = run(&["verify-paper"]);
    assert!(a.status.success(), "first run failed");
    assert!(b.status.success(), "second run failed");
    assert_eq!(a.stdout, b.stdout, "verify-paper output is not deterministic");
    let text = stdout(&a);
    assert!(!text.contains("FAIL"), "verify-paper reported a failure:\n{}", text);
}

#[test]
fn exit_codes_for_parse_and_fixture_errors() {
    let bad_flag = run(&["lclass", "--no-such-flag"]);
    assert_eq!(bad_flag.status.code(), Some(64));
    let bad_sub = run(&["frobnicate"]);
    assert_eq!(bad_sub.status.code(), Some(64));
    let missing = run(&["steenrod", "--table", "no-such-table"]);
    assert_eq!(missing.status.code(), Some(66));
    let domain = run(&["pi0", "--n", "40"]);
    assert_eq!(domain.status.code(), Some(2));
}

/// Mirror of the JSON report schema; `deny_unknown_fields` makes the
/// round-trip strict.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Report {
    command: String,
    #[allow(dead_code)]
    inputs: serde_json::Value,
    results: Vec<serde_json::Value>,
    warnings: Vec<String>,
}

#[test]
fn json_reports_round_trip() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["--json", "lclass", "--max-degree", "8"],
        vec!["--json", "genus", "--series", "ltilde", "--rank", "2"],
        vec!["--json", "genus", "--scaling", "--rank", "1", "--k", "1"],
        vec!["--json", "mmm", "--model", "sphere-s3"],
        vec!["--json", "signature", "--model", "sphere-s3"],
        vec!["--json", "steenrod", "--prop63"],
        vec!["--json", "wu", "--prime", "5", "--max-i", "6"],
        vec!["--json", "primes", "--kmax", "3"],
        vec!["--json", "pi0", "--n", "2"],
        vec!["--json", "invariants", "--manifold", "K3", "--kappa", "1", "--adams", "2"],
        vec!["--json", "verify-paper"],
    ];
    for args in cases {
        let out = run(&args);
        assert!(out.status.success(), "command failed: {:?}", args);
        let report: Report =
            serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| {
                panic!("JSON from {:?} does not re-parse: {}", args, e)
            });
        assert_eq!(report.command, args[1]);
        assert!(!report.results.is_empty(), "empty results for {:?}", args);
        if args[1] == "genus" && args.contains(&"--scaling") {
            assert!(!report.warnings.is_empty(), "scaling mismatch should warn");
        }
    }
}

#[test]
fn genus_scaling_reports_both_exponents() {
    let out = run(&["genus", "--scaling", "--rank", "1", "--k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("exponent -1"), "computed exponent missing:\n{}", text);
    assert!(text.contains("m - k = 0"), "printed exponent missing:\n{}", text);
    assert!(text.contains("WARN"), "mismatch warning missing:\n{}", text);
}

#[test]
fn fixture_search_path_env_var_is_honored() {
    let dir = std::env::temp_dir().join("charclass-fixture-test");
    std::fs::create_dir_all(&dir).unwrap();
    let builtin = run(&["--json", "steenrod", "--table", "oracle-p3"]);
    assert!(builtin.status.success());
    std::fs::write(dir.join("local.steenrod"), include_str_fixture()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_charclass"))
        .args(["steenrod", "--table", "local.steenrod", "--prop63"])
        .env("CHARCLASS_FIXTURES", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "env-resolved fixture failed");
    assert!(stdout(&out).contains("splits: false"));
}

fn include_str_fixture() -> &'static str {
    charclass::steenrod::PAPER_P3_FIXTURE
}
