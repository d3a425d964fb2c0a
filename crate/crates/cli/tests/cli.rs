use std::process::{Command, Output};

fn modcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcurve")).args(args).env_remove("MODCURVE_OUTPUT_DIR").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn modular_seven() {
    let out = modcurve(&["modular", "-p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["genus"], 3);
    assert_eq!(v["deg_lambda"], 2);
    assert_eq!(v["decompositions"]["5"]["irreps"], serde_json::json!(["V8'"]));
}

#[test]
fn census_and_counts() {
    let out = modcurve(&["su2-census", "-p", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["items"].as_array().unwrap().len(), 4);
    assert_eq!(json(&modcurve(&["su3-count", "-p", "7"]))["count"], 4);
    let e = json(&modcurve(&["exponents", "-p", "13"]));
    assert!(e["rank2"].as_array().unwrap().iter().all(|r| r["a"].is_null()));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["pic", "--signature", "2,3,6"][..],
        &["pic", "--signature", "2,x,7"],
        &["modular", "-p", "9"],
        &["tensor", "-p", "7", "-a", "V5", "-b", "V3"],
        &["solve", "-p", "11", "-k", "1", "-r", "3"],
        &["solve", "-p", "7", "-k", "1", "-r", "4"],
        &["frobnicate"],
    ] {
        assert_eq!(modcurve(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn algebra_subcommands() {
    let v = json(&modcurve(&["tensor", "-p", "7", "-a", "3", "-b", "3*"]));
    assert_eq!(v["display"], "V1 + V8");
    let v = json(&modcurve(&["sympow", "-p", "7", "-r", "V3*", "-n", "2"]));
    assert_eq!(v["dimension"], 6);
    let v = json(&modcurve(&["molien", "-p", "7", "--target", "V1", "--source", "V3", "-N", "5"]));
    assert_eq!(v["coefficients"], serde_json::json!(["1", "0", "0", "0", "1", "0"]));
    let v = json(&modcurve(&["pic", "--signature", "2,4,6"]));
    assert_eq!(v["torsion"], serde_json::json!([2, 2]));
    let out = modcurve(&["chartab", "-p", "7", "--group", "psl2", "--format", "tsv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 7);
}

#[test]
fn solve_reports_convergence_in_exit_code() {
    let ok = modcurve(&["solve", "-p", "7", "-k", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["report"]["converged"], true);
    let infeasible = modcurve(&["solve", "-p", "7", "-k", "1"]);
    assert_eq!(infeasible.status.code(), Some(1));
}

#[test]
fn golden_mismatch_exits_1_and_missing_fixtures_exit_2() {
    let out = modcurve(&["reproduce-appendices", "-N", "20"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("V8'\tV8'"));
    assert_eq!(modcurve(&["reproduce-appendices", "--fixtures", "/nonexistent"]).status.code(), Some(2));
}
