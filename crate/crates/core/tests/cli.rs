//! The command-line interface, driven in-process.

use std::ffi::OsString;
use std::path::PathBuf;

use alambda::cli::{self, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NORMAL, EXIT_OK, EXIT_UNKNOWN};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("alambda").chain(args.iter().copied()).map(OsString::from);
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("alambda-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn records(out: &str) -> Vec<serde_json::Value> {
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn demos_match_their_fixtures() {
    for (name, file) in [
        ("claim21", "demo_lifting.txt"),
        ("subars", "demo_split.txt"),
        ("inconsistency", "demo_inconsistency.txt"),
    ] {
        let r = run(&["demo", name]);
        assert_eq!(r.code, EXIT_OK, "{name}: {}", r.err);
        assert_eq!(r.out, fixture(file), "demo {name}");
    }
    let r = run(&["--format", "json-lines", "demo", "claim21"]);
    assert_eq!(r.out, fixture("demo_lifting.jsonl"));
}

#[test]
fn json_records_carry_a_version() {
    let r = run(&["--format", "json-lines", "reduce", "(λx.x)y"]);
    assert_eq!(r.code, EXIT_OK);
    let recs = records(&r.out);
    assert!(recs.iter().all(|v| v["version"] == 1));
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs[1]["record"], "trace");
    assert_eq!(recs[1]["end"], "y");
}

#[test]
fn searches_start_with_the_settings() {
    let r = run(&["--semiring", "bool", "--fuel", "7", "beta", "(λx.x)y", "y"]);
    assert!(r.out.starts_with("# semiring bool, fuel 7, split full\n"), "{}", r.out);
    assert_eq!(run(&["--semiring", "bool", "canon", "x + x"]).out, "x\n");
}

#[test]
fn canonical_forms() {
    for (input, want) in [("λx.0", "0"), ("(2.x)y + (3.x)y", "5.(x)y"), ("(λx.y + z)w", "(λx.y)w + (λx.z)w")] {
        let r = run(&["canon", input]);
        assert_eq!(r.code, EXIT_OK);
        assert_eq!(r.out.trim_end(), want, "{input}");
    }
}

#[test]
fn proofs_round_trip_through_check() {
    let (subject, goal) = ("(λx.(x)x)((λa.a)y)", "2.(y)y + ((λa.a)y)y");
    let r = run(&["--format", "json-lines", "prove", subject, goal]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let path = scratch("derivation.jsonl", &r.out);
    let c = run(&["--format", "json-lines", "check", path.to_str().unwrap()]);
    assert_eq!(c.code, EXIT_OK, "{}", c.err);
    let verdict = records(&c.out).pop().unwrap();
    assert_eq!(verdict["record"], "check");
    assert!(c.out.contains("(λx.(x)x)((λx.x)y) ⊩ 2.(y)y + ((λx.x)y)y"), "{}", c.out);
}

#[test]
fn tampered_derivations_are_rejected() {
    let r = run(&["--format", "json-lines", "prove", "(λx.x)y", "y"]);
    assert_eq!(r.code, EXIT_OK);
    // Claim a different variable at the leaf.
    let mut recs = records(&r.out);
    let head = &mut recs[1]["derivation"]["head"];
    assert_eq!(head["rule"], "var");
    head["var"] = serde_json::json!({"free": "z"});
    let forged: String = recs.iter().map(|v| format!("{v}\n")).collect();
    let path = scratch("forged.jsonl", &forged);
    let c = run(&["check", path.to_str().unwrap()]);
    assert_eq!(c.code, EXIT_NEGATIVE, "{}{}", c.out, c.err);
}

#[test]
fn reductions_convert_to_certificates() {
    let r = run(&["--format", "json-lines", "reduce", "--steps", "2", "(λx.(x)x)((λy.y)z)"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let path = scratch("trace.jsonl", &r.out);
    let c = run(&["--format", "json-lines", "conserve", path.to_str().unwrap()]);
    assert_eq!(c.code, EXIT_OK, "{}", c.err);
    assert!(records(&c.out).iter().any(|v| v["record"] == "certificate"));
}

#[test]
fn equivalence_finds_a_common_reduct() {
    let r = run(&["equiv", "(λx.(x)x)z", "(λy.(z)y)z"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("(z)z"), "{}", r.out);
    assert_eq!(run(&["equiv", "x", "y"]).code, EXIT_NEGATIVE);
}

#[test]
fn supports() {
    assert_eq!(run(&["support", "2.x + y"]).out, "x\ny\n");
    assert_eq!(run(&["lambda-support", "(λx.x)(y + z)"]).out, "(λx.x)y\n(λx.x)z\n");
}

#[test]
fn exit_codes() {
    let omega3 = "(λx.((x)x)x)λx.((x)x)x";
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], EXIT_OK),
        (&["beta", "(λx.x)y", "y"], EXIT_OK),
        (&["beta", "(λx.(x)x)y", "(y)z"], EXIT_NEGATIVE),
        (&["prove", "(λx.(x)x)y", "(y)z"], EXIT_NEGATIVE),
        (&["canon", "(λx.x"], EXIT_INPUT),
        (&["frobnicate"], EXIT_INPUT),
        (&["--semiring", "int", "reduce", "(λx.x)y"], EXIT_INPUT),
        (&["--split", "half", "reduce", "(λx.x)y"], EXIT_INPUT),
        (&["--fuel", "0", "canon", "x"], EXIT_INPUT),
        (&["reduce", "λx.x"], EXIT_NORMAL),
        (&["--fuel", "5", "prove", omega3, "x"], EXIT_UNKNOWN),
        (&["--fuel", "5", "beta", omega3, "x"], EXIT_UNKNOWN),
    ];
    for (args, want) in cases {
        let r = run(args);
        assert_eq!(r.code, *want, "{args:?}: {}{}", r.out, r.err);
    }
}

#[test]
fn syntax_errors_report_a_position() {
    let r = run(&["canon", "(λx.x"]);
    assert!(r.err.contains("1:6"), "{}", r.err);
    assert!(r.out.is_empty() || r.out.starts_with('#'));
}
