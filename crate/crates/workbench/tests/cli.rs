use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semistar_workbench::report::{Outcome, Report};
use semistar_workbench::run::run_scenario;
use semistar_workbench::scenario::{ConfigError, Scenario};

const BUNDLED: [&str; 9] = ["ex32", "ex51", "ex52", "ex53", "prop33", "thm37", "thm38", "cor45", "prop56"];

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

fn semistar(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semistar"));
    cmd.args(args).env_remove("SEMISTAR_SEED");
    if let Some(s) = seed_env {
        cmd.env("SEMISTAR_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const LOCAL: &str = r#"{ "kind": "poly", "vars": ["X", "Y"], "center": "origin" }"#;

#[test]
fn bundled_scenarios_pass() {
    for name in BUNDLED {
        let s = Scenario::load(&scenario_path(name)).unwrap();
        let r = run_scenario(&s, None, 0).unwrap();
        let failed: Vec<_> = r.assertions.iter().filter(|a| a.verdict != Outcome::Pass).collect();
        assert!(failed.is_empty(), "{name}: {failed:#?}");
        assert!(!r.assertions.is_empty());
    }
}

#[test]
fn malformed_json_exits_2() {
    let p = scratch("malformed.json", "{ \"version\": 1, \"name\": ");
    let o = semistar(&["check", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
}

#[test]
fn configuration_errors_exit_2() {
    let cases = [
        ("unknown-field.json", format!(r#"{{"version": 1, "name": "x", "domain": {LOCAL}, "bogus": 1}}"#)),
        ("bad-version.json", format!(r#"{{"version": 9, "name": "x", "domain": {LOCAL}}}"#)),
        (
            "unbound.json",
            format!(
                r#"{{"version": 1, "name": "x", "domain": {LOCAL}, "assertions": [
                {{"id": "a", "kind": "axioms", "origin": "o", "op": "nowhere"}}]}}"#
            ),
        ),
        (
            "extra-operand.json",
            format!(
                r#"{{"version": 1, "name": "x", "domain": {LOCAL}, "assertions": [
                {{"id": "a", "kind": "axioms", "origin": "o", "op": "d", "elem": "X"}}]}}"#
            ),
        ),
        (
            "duplicate.json",
            format!(
                r#"{{"version": 1, "name": "x", "domain": {LOCAL}, "assertions": [
                {{"id": "a", "kind": "axioms", "origin": "o", "op": "d"}},
                {{"id": "a", "kind": "axioms", "origin": "o", "op": "v"}}]}}"#
            ),
        ),
    ];
    for (file, body) in cases {
        let p = scratch(file, &body);
        let o = semistar(&["check", p.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(2), "{file}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = semistar(&["check", "/nonexistent/scenario.json"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = semistar(&["eval", "ideal(X, "], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn binding_errors_name_the_assertion() {
    let s = Scenario::from_json(&format!(
        r#"{{"version": 1, "name": "x", "domain": {LOCAL}, "assertions": [
        {{"id": "needs-ideal", "kind": "membership", "origin": "o", "op": "v", "elem": "X", "expect": true}}]}}"#
    ))
    .unwrap();
    match run_scenario(&s, None, 0) {
        Err(ConfigError::Assertion { id, msg }) => {
            assert_eq!(id, "needs-ideal");
            assert!(msg.contains("ideal"), "{msg}");
        }
        other => panic!("expected a binding error, got {other:?}"),
    }
}

#[test]
fn false_expectation_exits_1_with_counterexample() {
    let body = format!(
        r#"{{"version": 1, "name": "wrong", "domain": {LOCAL}, "seed": 1, "assertions": [
        {{"id": "xy-in-g", "kind": "membership", "origin": "deliberately false", "op": "d",
          "ideal": "ideal(X^2, Y^2)", "elem": "X*Y", "expect": true}},
        {{"id": "d-is-eab", "kind": "eab", "origin": "deliberately false", "op": "d",
          "triples": [["ideal(X, Y)", "pow(ideal(X, Y), 2)", "ideal(X^2, Y^2)"]], "expect": true}}]}}"#
    );
    let p = scratch("false-expectation.json", &body);
    let o = semistar(&["check", p.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(o.status.code(), Some(1));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.summary, "0/2");
    let eab = r.assertions.iter().find(|a| a.id == "d-is-eab").unwrap();
    assert_eq!(eab.verdict, Outcome::Fail);
    assert!(eab.witness.as_deref().unwrap().contains("G = (X^2, Y^2)"));
}

#[test]
fn empty_scenario_summarizes_to_zero_of_zero() {
    let p = scratch("empty.json", &format!(r#"{{"version": 1, "name": "empty", "domain": {LOCAL}}}"#));
    let o = semistar(&["check", p.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.summary, "0/0");
    assert!(r.assertions.is_empty());
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let path = scenario_path("ex53");
    let s = Scenario::load(&path).unwrap();
    let a = run_scenario(&s, Some(7), 0).unwrap();
    let b = run_scenario(&s, Some(7), 0).unwrap();
    assert_eq!(a.without_timings(), b.without_timings());
    assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);

    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ex53-report.json");
    let o = semistar(&["check", path.to_str().unwrap(), "--seed", "7", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let saved = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved.without_timings(), a.without_timings());
    let o = semistar(&["report", out.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(Report::from_json(&stdout(&o)).unwrap(), saved);
    let o = semistar(&["report", out.to_str().unwrap()], None);
    assert!(stdout(&o).contains("summary: 5/5 passed"));
}

#[test]
fn ex53_report_carries_the_a_witness() {
    let s = Scenario::load(&scenario_path("ex53")).unwrap();
    let r = run_scenario(&s, None, 0).unwrap();
    let a = r.assertions.iter().find(|a| a.id == "n-a-closure-is-d").unwrap();
    assert_eq!(a.witness.as_deref(), Some("H = (X, Y)"));
}

#[test]
fn numbers_are_rational_strings() {
    let s = Scenario::load(&scenario_path("ex51")).unwrap();
    let r = run_scenario(&s, None, 0).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["seed"], "51/1");
    assert_eq!(json["summary"], "8/8");
    for a in json["assertions"].as_array().unwrap() {
        let ms = a["millis"].as_str().unwrap();
        let (p, q) = ms.split_once('/').unwrap();
        assert!(p.parse::<u64>().is_ok() && q.parse::<u64>().unwrap() > 0, "{ms}");
    }
}

#[test]
fn seed_precedence() {
    let body = format!(
        r#"{{"version": 1, "name": "seedless", "domain": {LOCAL}, "assertions": [
        {{"id": "ax", "kind": "axioms", "origin": "o", "op": "d", "samples": 5}}]}}"#
    );
    let p = scratch("seedless.json", &body);
    let p = p.to_str().unwrap();
    let seed_of = |o: Output| Report::from_json(&stdout(&o)).unwrap().seed;
    assert_eq!(seed_of(semistar(&["check", p, "--format", "json"], None)), "0/1");
    assert_eq!(seed_of(semistar(&["check", p, "--format", "json"], Some("17"))), "17/1");
    assert_eq!(seed_of(semistar(&["check", p, "--format", "json", "--seed", "4"], Some("17"))), "4/1");
    let explicit = scenario_path("ex32");
    let o = semistar(&["check", explicit.to_str().unwrap(), "--format", "json"], Some("17"));
    assert_eq!(seed_of(o), "32/1");
    let o = semistar(&["axioms", "--op", "d", "--samples", "3"], Some("not-a-number"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_and_member() {
    let o = semistar(&["eval", "close(b, ideal(X^2, Y^2))"], None);
    assert_eq!(stdout(&o).trim(), "(X^2, X*Y, Y^2)");
    let o = semistar(&["eval", "frac(ideal(2, 1+w), 1)", "--domain", "quadratic:-3"], None);
    assert_eq!(stdout(&o).trim(), "(2, w + 1)");
    let o = semistar(&["member", "--op", "a(d, 2)", "--ideal", "ideal(X^2, Y^2)", "--elem", "X*Y"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(": yes") && text.contains("H = (X, Y)"), "{text}");
    let o = semistar(&["member", "--op", "d", "--ring", "na", "--elem", "1/(X + Y*$X)"], None);
    assert!(stdout(&o).contains(": no"));
    let o = semistar(&["member", "--op", "v", "--ring", "na", "--elem", "1/(X + Y*$X)"], None);
    assert!(stdout(&o).contains(": yes"));
    let o = semistar(&["axioms", "--op", "ex53", "--samples", "10", "--seed", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ok    idempotent"));
}
