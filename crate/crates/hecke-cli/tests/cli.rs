use std::sync::Arc;

use assert_cmd::Command;
use serde_json::Value;

use hecke::whittaker::whittaker_schema_instance;
use hecke::{CartanDatum, CartanType, MetaplecticDatum};
use hecke_cli::{parse_poly, parse_weight, Output};

fn hecke() -> Command {
    Command::cargo_bin("hecke").unwrap()
}

fn run_json(args: &[&str]) -> (Output, Value, bool) {
    let out = hecke().args(args).args(["--format", "json"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    let parsed: Output = serde_json::from_value(value.clone()).unwrap();
    (parsed, value, out.status.success())
}

fn schema() -> jsonschema::JSONSchema {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&src).unwrap()).unwrap()
}

/// Check names and verdicts, ignoring timings.
fn verdicts(reports: &[hecke::Report]) -> Vec<(String, bool)> {
    reports.iter().flat_map(|r| r.checks.iter().map(|c| (c.name.clone(), c.passed))).collect()
}

#[test]
fn generic_g2_replicates_three_true_flags() {
    let out = hecke().args(["verify", "--type", "G2", "--instance", "generic"]).assert().success();
    let text = String::from_utf8(out.get_output().stdout.clone()).unwrap();
    assert!(text.contains("relations: [True, True, True]"), "{text}");
    assert!(text.trim_end().ends_with("status: pass"));
}

#[test]
fn verify_examples_pass() {
    hecke().args(["verify", "--type", "A2", "--instance", "whittaker", "--bernstein", "(1,0,0)"]).assert().success();
    hecke().args(["verify", "--type", "A2", "--instance", "metaplectic", "--n", "2", "--B", "dot"]).assert().success();
    hecke().args(["verify", "--type", "C2", "--instance", "spherical"]).assert().success();
    hecke().args(["verify", "--type", "A1", "--instance", "rmatrix", "--n", "2", "--gauss"]).assert().success();
}

#[test]
fn verify_rejects_unsupported_combinations() {
    hecke().args(["verify", "--type", "A3", "--instance", "generic"]).assert().code(2);
    hecke().args(["verify", "--type", "G2", "--instance", "rmatrix"]).assert().code(2);
    hecke().args(["verify", "--type", "A1", "--instance", "metaplectic", "--bernstein", "(1,0)"]).assert().code(2);
    hecke().args(["verify", "--type", "A1", "--instance", "whittaker", "--bernstein", "(1,0,0)"]).assert().code(2);
    hecke().args(["verify", "--type", "E8", "--instance", "whittaker"]).assert().code(2);
}

#[test]
fn unknown_flags_are_rejected() {
    hecke().args(["verify", "--type", "A2", "--instance", "generic", "--bogus"]).assert().code(2);
    hecke().args(["frobnicate"]).assert().code(2);
}

#[test]
fn cs_examples() {
    for (t, w) in [("A1", "(1,0)"), ("A2", "(0,0,0)"), ("A2", "(2,1,0)"), ("G2", "(1,0,-1)")] {
        let (out, _, ok) = run_json(&["cs", "--type", t, "--weight", w]);
        assert!(ok && out.passed(), "{t} {w}");
    }
    // At λ = 0 the character is 1 and the value is the bare product.
    let (out, _, _) = run_json(&["cs", "--type", "A2", "--weight", "(0,0,0)"]);
    let lhs = &out.details.iter().find(|d| d.label == "I(z^lambda)").unwrap().value;
    let expected = parse_poly("1 - u^2*z1^-1*z2", None).unwrap()
        * parse_poly("1 - u^2*z2^-1*z3", None).unwrap()
        * parse_poly("1 - u^2*z1^-1*z3", None).unwrap();
    assert_eq!(parse_poly(lhs, None).unwrap(), expected);
    hecke().args(["cs", "--type", "A2", "--weight", "(0,1,0)"]).assert().code(2);
}

#[test]
fn metaplectic_table_for_the_double_cover() {
    let (out, _, ok) = run_json(&["metaplectic", "--r", "2", "--n", "2"]);
    assert!(ok);
    let rows: Vec<&str> = out.details.iter().filter(|d| d.label.starts_with("nu = ")).map(|d| d.value.as_str()).collect();
    assert_eq!(rows, ["0", "g1*z1*z2^-1", "1", "0"]);
}

#[test]
fn metaplectic_n1_gives_the_cs_value() {
    let (out, _, ok) = run_json(&["metaplectic", "--r", "2", "--n", "1", "--weight", "(1,0)"]);
    assert!(ok);
    let get = |l: &str| out.details.iter().find(|d| d.label == l).unwrap().value.clone();
    assert_eq!(get("aggregate"), get("Casselman-Shalika value at 1/z"));
    assert_eq!(parse_poly(&get("aggregate"), None).unwrap(), parse_poly("z1^-1 + z2^-1 - u^2*z1*z2^-2 - u^2*z2^-1", None).unwrap());
}

#[test]
fn injected_mismatch_fails_with_a_located_entry() {
    let (out, value, ok) = run_json(&["metaplectic", "--r", "2", "--n", "2", "--inject-mismatch"]);
    assert!(!ok && !out.passed());
    assert!(schema().is_valid(&value));
    let failed: Vec<_> = out.reports.iter().flat_map(|r| &r.checks).filter(|c| !c.passed).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.failure.as_ref().is_some_and(|f| !f.location.is_empty())));
}

#[test]
fn rmatrix_examples() {
    hecke().args(["rmatrix", "ybe", "--n", "2"]).assert().success();
    hecke().args(["rmatrix", "pybe", "--n", "3"]).assert().success();
    hecke().args(["rmatrix", "hecke", "--n", "3", "--twisted"]).assert().success();
    hecke().args(["rmatrix", "schema", "--n", "2", "--r", "3"]).assert().success();
    let (out, _, ok) = run_json(&["rmatrix", "triangularity", "--n", "2", "--gauss"]);
    assert!(ok);
    assert_eq!(out.details[0].label, "scalar");
    assert_eq!(out.details[0].value, "1");
    hecke().args(["rmatrix", "ybe", "--n", "5"]).assert().code(2);
    hecke().args(["rmatrix", "schema", "--n", "2", "--r", "4"]).assert().code(2);
    hecke().args(["rmatrix", "ybe", "--n", "2", "--gauss", "--twisted"]).assert().code(2);
}

#[test]
fn wreath_and_demazure_commands() {
    hecke().args(["wreath", "--r", "2"]).assert().success();
    hecke().args(["wreath", "--r", "3", "--module", "trivial"]).assert().success();
    for kind in ["whittaker", "unconjugated", "lusztig"] {
        hecke().args(["demazure", "--type", "C2", "--kind", kind, "--bound", "1"]).assert().success();
    }
    let (out, _, _) = run_json(&["demazure", "--type", "A1", "--poly", "z1", "--word", "1"]);
    // Expected value from the defining formula of the modified operator with x = z1/z2.
    let got = parse_poly(&out.details[1].value, None).unwrap();
    let x = hecke::RationalFunction::from_poly(parse_poly("z1*z2^-1", None).unwrap());
    let v = hecke::RationalFunction::from_poly(parse_poly("u^2", None).unwrap());
    let one = hecke::RationalFunction::one();
    let f = hecke::RationalFunction::from_poly(parse_poly("z1", None).unwrap());
    let fs = hecke::RationalFunction::from_poly(parse_poly("z2", None).unwrap());
    let den = (&x - &one).inv().unwrap();
    let expected = &(&(&(&one - &v) * &den) * &f) + &(&(&(&(&v * &x.inv().unwrap()) - &one) * &den) * &fs);
    assert_eq!(hecke::RationalFunction::from_poly(got), expected);
}

#[test]
fn polynomial_syntax_errors_carry_the_offset() {
    let out = hecke().args(["demazure", "--type", "A1", "--poly", "1 + + z1"]).assert().code(2);
    let err = String::from_utf8(out.get_output().stderr.clone()).unwrap();
    assert!(err.contains("offset 4"), "{err}");
    let out = hecke().args(["demazure", "--type", "A1", "--poly", "z3"]).assert().code(2);
    assert!(String::from_utf8(out.get_output().stderr.clone()).unwrap().contains("z3"));
}

#[test]
fn json_validates_round_trips_and_agrees_with_text() {
    let schema = schema();
    let cases: &[&[&str]] = &[
        &["verify", "--type", "A2", "--instance", "generic"],
        &["cs", "--type", "C2", "--weight", "(1,1)"],
        &["demazure", "--type", "A2", "--bound", "1"],
        &["rmatrix", "hecke", "--n", "2"],
        &["metaplectic", "--r", "2", "--n", "3"],
        &["wreath", "--r", "2"],
    ];
    for args in cases {
        let (out, value, ok) = run_json(args);
        if let Err(errors) = schema.validate(&value) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{args:?}: {msgs:?}");
        }
        assert_eq!(serde_json::to_value(&out).unwrap(), value);
        let text = hecke().args(*args).output().unwrap();
        let verdict = if ok { "status: pass" } else { "status: fail" };
        assert_eq!(text.status.success(), ok);
        assert!(String::from_utf8(text.stdout).unwrap().trim_end().ends_with(verdict));
    }
}

#[test]
fn cli_verdicts_match_in_process_verifiers() {
    let c = Arc::new(CartanDatum::new(CartanType::A(2)).unwrap());
    let direct = whittaker_schema_instance(c.clone()).verify(&c.lattice_basis);
    let (out, _, _) = run_json(&["verify", "--type", "A2", "--instance", "whittaker"]);
    assert_eq!(verdicts(&out.reports), verdicts(&[direct]));

    let d = MetaplecticDatum::gl(3, 2).unwrap();
    let direct = hecke::metaplectic::verify_cover(&d).unwrap();
    let (out, _, _) = run_json(&["verify", "--type", "A2", "--instance", "metaplectic", "--n", "2"]);
    assert_eq!(verdicts(&out.reports), verdicts(&[direct]));
}

#[test]
fn runs_are_deterministic_and_honour_the_thread_variable() {
    let strip = |o: Output| (o.details, verdicts(&o.reports));
    let a = strip(run_json(&["verify", "--type", "C2", "--instance", "metaplectic", "--n", "2"]).0);
    let out = hecke()
        .env("HECKE_THREADS", "1")
        .args(["verify", "--type", "C2", "--instance", "metaplectic", "--n", "2", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let b: Output = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(a, strip(b));
    hecke().env("HECKE_THREADS", "zero").args(["rmatrix", "ybe", "--n", "2"]).assert().code(2);
}

#[test]
fn weight_syntax() {
    assert_eq!(parse_weight("(1,0,-1)").unwrap(), vec![1, 0, -1]);
    assert_eq!(parse_weight("[2, 1]").unwrap(), vec![2, 1]);
    assert_eq!(parse_weight("3").unwrap(), vec![3]);
    assert!(parse_weight("(1,x)").is_err());
}
