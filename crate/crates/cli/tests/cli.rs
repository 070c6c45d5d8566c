use std::process::Command;

use seifert_census_cli::report::Report;
use seifert_census_cli::run;

fn ok(args: &[&str]) -> Report {
    let out = run(std::iter::once("seifert-census").chain(args.iter().copied()), None);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("seifert-census").chain(args.iter().copied()), None).code
}

#[test]
fn count_family_member() {
    let r = ok(&["count", "-1", "1/2", "1/2", "1/7"]);
    assert_eq!(r.outputs["census"]["total"], "3");
    assert_eq!(r.outputs["census"]["phi"], "2");
}

#[test]
fn count_reorders() {
    let r = ok(&["count", "-1", "1/2", "2/3", "3/4"]);
    assert_eq!(r.outputs["reordered"], true);
    assert_eq!(r.outputs["normalized"], serde_json::json!(["3/4", "2/3", "1/2"]));
}

#[test]
fn validation_errors_exit_two() {
    assert_eq!(code(&["count", "-1", "1/2", "1/3", "1/4"]), 2);
    assert_eq!(code(&["count", "0", "1/2", "1/2", "1/4"]), 2);
    assert_eq!(code(&["count", "-1", "1/2", "1/2", "x"]), 2);
    assert_eq!(code(&["count", "-1", "1/2", "1/2", "5/4"]), 2);
    assert_eq!(code(&["lattice", "pkl", "--p", "3", "--k", "2"]), 2);
    assert_eq!(code(&["cobordism", "pklm", "--p", "3", "--k", "2", "--l", "2"]), 2);
    assert_eq!(code(&["dinv", "--p", "1"]), 2);
    assert_eq!(code(&["layers", "3/2"]), 2);
    assert_eq!(code(&["d3"]), 2);
    assert_eq!(code(&["bogus"]), 2);
}

#[test]
fn d3_examples() {
    let r = ok(&["d3", "--p", "5"]);
    assert_eq!(r.outputs["d3"], "-3/4");
    assert!(r.checks["d3_closed_form"]);
    let r = ok(&["d3", "--p", "5", "--mirror"]);
    assert_eq!(r.outputs["d3"], "-3/4");
}

#[test]
fn orbits_match() {
    let r = ok(&["orbits", "-1", "3/4", "2/3", "2/5"]);
    assert_eq!(r.outputs["orbits"]["mixed"], 6);
    assert_eq!(r.outputs["orbits"]["equal"], 2);
    assert!(r.passed());
}

#[test]
fn cap_from_environment() {
    let args = ["seifert-census", "orbits", "-1", "3/4", "1/2", "2/5"];
    assert_eq!(run(args, Some("5")).code, 2);
    assert_eq!(run(args, Some("abc")).code, 2);
    assert_eq!(run(args, Some("0")).code, 2);
    assert_eq!(run(args, Some("1000")).code, 0);
}

#[test]
fn lattice_and_cobordism_examples() {
    assert_eq!(ok(&["lattice", "pkl", "--p", "4", "--k", "5", "--l", "4"]).outputs["distinct_values"], 45);
    assert_eq!(ok(&["cobordism", "pklm", "--p", "3", "--k", "2", "--l", "2", "--m", "2"]).outputs["classes"], 2);
    assert_eq!(ok(&["cobordism", "pkm", "--p", "3", "--k", "3", "--m", "2"]).outputs["classes"], 4);
    assert_eq!(ok(&["cobordism", "pkl", "--p", "3", "--k", "3", "--l", "3"]).outputs["classes"], 4);
    assert_eq!(ok(&["cobordism", "pk", "--p", "4", "--k", "5"]).outputs["classes"], 4);
}

#[test]
fn homology_and_dinv() {
    let r = ok(&["homology", "--p", "7"]);
    assert_eq!(r.outputs["linking_group"], "Z/4");
    assert_eq!(r.outputs["plumbing_group"], "Z/4");
    let r = ok(&["homology", "--p", "8"]);
    assert_eq!(r.outputs["plumbing_group"], "Z/2 + Z/2");
    let r = ok(&["dinv", "--p", "6"]);
    assert_eq!(r.outputs["d_invariants"], serde_json::json!(["0", "0", "1", "2"]));
}

#[test]
fn fillability() {
    let r = ok(&["fillability", "--p", "10"]);
    assert_eq!(r.outputs["obstruction"], false);
    assert_eq!(r.outputs["decomposition"], serde_json::json!([1]));
    assert_eq!(ok(&["fillability", "--p", "11"]).outputs["obstruction"], true);
}

#[test]
fn layers_table() {
    let r = ok(&["layers", "2/5"]);
    assert_eq!(r.outputs["expansion"], serde_json::json!(["3", "2"]));
    let out = run(["seifert-census", "layers", "2/5", "--table"], None);
    assert!(out.stdout.contains("layers[0]"), "{}", out.stdout);
}

#[test]
fn decimal_is_labelled() {
    let r = ok(&["d3", "--p", "5", "--decimal"]);
    assert_eq!(r.decimal_approximations["d3"], "~-0.750000");
    let r = ok(&["d3", "--p", "6"]);
    assert!(r.decimal_approximations.is_empty());
}

#[test]
fn deterministic_output() {
    let args = ["seifert-census", "verify", "--max-denominator", "4", "--max-p", "8", "--jobs", "2"];
    let a = run(args, None);
    let b = run(args, None);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exported_diagram_feeds_d3() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    for format in ["text", "json"] {
        let out = run(["seifert-census", "export", "diagram", "--p", "9", "--mirror", "--format", format], None);
        assert_eq!(out.code, 0);
        let path = dir.join(format!("xi9.{format}"));
        std::fs::write(&path, &out.stdout).unwrap();
        let r = ok(&["d3", "--diagram", path.to_str().unwrap()]);
        assert_eq!(r.outputs["d3"], "-7/4");
    }
    let bad = dir.join("bad.diagram");
    std::fs::write(&bad, "diagram\ncomponent 0 0 7\n").unwrap();
    assert_eq!(code(&["d3", "--diagram", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["d3", "--diagram", dir.join("missing").to_str().unwrap()]), 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_seifert-census");
    let out = Command::new(bin).args(["count", "-1", "1/2", "1/2", "1/7"]).output().unwrap();
    assert!(out.status.success());
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.outputs["census"]["total"], "3");
    let out = Command::new(bin).args(["count", "-1", "1/2", "1/3", "1/4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r2"));
    let out = Command::new(bin).env("SEIFERT_CENSUS_CAP", "3").args(["orbits", "-1", "1/2", "1/2", "1/3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
