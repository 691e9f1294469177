//! One pass/fail line per acceptance criterion, driven by the bundled
//! scenarios plus a few direct cross-checks against the core library.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use semistar_core::domains::{Domain, DomainSpec, PrimeIdeal};
use semistar_core::exact::engine_stats;
use semistar_core::function_rings::na_maximal_trace;
use semistar_core::semistar::quasi::same_primes;
use semistar_core::semistar::{quasi_star_spectrum, SemistarOp};
use semistar_workbench::report::{parse_rat, AssertionReport, Outcome, Report};
use semistar_workbench::run::run_scenario;
use semistar_workbench::scenario::Scenario;

const BUNDLED: [&str; 9] = ["ex32", "ex51", "ex52", "ex53", "prop33", "thm37", "thm38", "cor45", "prop56"];

struct Run {
    scenario: Scenario,
    report: Report,
    wall: Duration,
}

impl Run {
    fn get(&self, id: &str) -> Result<&AssertionReport, String> {
        self.report
            .assertions
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| format!("{}: no assertion '{id}'", self.report.scenario))
    }

    /// The assertion passed; returns its witness.
    fn pass(&self, id: &str) -> Result<String, String> {
        let a = self.get(id)?;
        if a.verdict != Outcome::Pass {
            return Err(format!("{}/{id}: {:?} ({:?})", self.report.scenario, a.verdict, a.witness));
        }
        Ok(a.witness.clone().unwrap_or_default())
    }

    fn samples(&self, id: &str) -> usize {
        self.scenario.assertions.iter().find(|a| a.id == id).and_then(|a| a.samples).unwrap_or(0)
    }

    fn millis(&self, id: &str) -> Result<f64, String> {
        let r = parse_rat(&self.get(id)?.millis).ok_or("unparseable millis")?;
        Ok(r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap())
    }

    fn all_pass(&self) -> Result<(), String> {
        match self.report.assertions.iter().find(|a| a.verdict != Outcome::Pass) {
            Some(a) => Err(format!("{}/{}: {:?} ({:?})", self.report.scenario, a.id, a.verdict, a.witness)),
            None => Ok(()),
        }
    }
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion1(r: &Run) -> Result<String, String> {
    r.pass("eab-fails")?;
    let ms = r.millis("eab-fails")?;
    check(ms < 1000.0, format!("e.a.b. check took {ms} ms"))?;
    let h = r.pass("xy-in-a-closure")?;
    check(h == "H = (X, Y)", format!("witness {h}"))?;
    r.pass("xy-not-in-g")?;
    r.pass("kr-contraction")?;
    r.pass("newton-closure")?;
    r.pass("tilde-is-d")?;
    check(r.samples("tilde-is-d") >= 50, "fewer than 50 tilde samples")?;
    r.pass("kr-contains-fraction")?;
    r.pass("na-misses-fraction")?;
    Ok(format!("eab {ms:.1} ms, {h}, Kr contraction = Newton closure, Na ⊊ Kr"))
}

fn criterion2(r: &Run) -> Result<String, String> {
    r.all_pass()?;
    check(r.samples("axioms") >= 100, "fewer than 100 axiom samples")?;
    check(r.pass("m-set")? == "M = [(X, Y)]", "M-set differs")?;
    r.pass("tilde-is-d")?;
    r.pass("a-pinned-to-t")?;
    check(r.pass("n-a-closure-is-d")? == "H = (X, Y)", "N^a witness")?;
    check(r.wall < Duration::from_secs(5), format!("took {:?}", r.wall))?;
    Ok(format!("{} samples, {:?}", r.samples("axioms"), r.wall))
}

fn criterion3(r: &Run) -> Result<String, String> {
    r.all_pass()?;
    let vf = r.scenario.ops.get("vf").ok_or("no vf op")?;
    check(vf.contains("primes=[Y, X - Y]") && r.scenario.valuations["VX"] == "lex([1, 0], [0, 1])", "family differs")?;
    r.pass("n-quasi-maximal")?;
    r.pass("vx-is-star-valuation")?;
    r.pass("tilde-is-d")?;
    check(r.wall < Duration::from_secs(5), format!("took {:?}", r.wall))?;
    Ok(format!("{:?}", r.wall))
}

fn criterion4(prop33: &Run, thm37: &Run) -> Result<String, String> {
    let pairs = [
        (prop33, "v-tilde-vs-w"),
        (prop33, "v-tilde-vs-nagata"),
        (prop33, "ex53-tilde-vs-w"),
        (prop33, "ex53-tilde-vs-nagata"),
        (thm37, "tilde-vs-w"),
        (thm37, "tilde-vs-nagata"),
    ];
    let mut total = 0.0;
    for (r, id) in pairs {
        r.pass(id)?;
        check(r.samples(id) >= 50, format!("{id}: fewer than 50 pairs"))?;
        total += r.millis(id)?;
    }
    check(total < 30_000.0, format!("{total} ms"))?;
    Ok(format!("6 comparisons of 50 pairs, {total:.0} ms"))
}

fn criterion5(cor45: &Run, thm37: &Run) -> Result<String, String> {
    for (r, id) in [(cor45, "chain-v"), (cor45, "chain-d"), (cor45, "chain-ex53"), (thm37, "chain")] {
        r.pass(id)?;
        check(r.samples(id) >= 50, format!("{id}: fewer than 50 functions"))?;
    }
    Ok("local v, d, ex53 and Z[√-3] v, 50 functions each".into())
}

fn criterion6(r: &Run) -> Result<String, String> {
    r.all_pass()?;
    let sep = r.pass("d-and-v")?;
    check(sep.starts_with("1/(Y*X† + X)"), format!("separator {sep}"))?;
    Ok(sep)
}

fn criterion7(r: &Run) -> Result<String, String> {
    let a = r.scenario.assertions.iter().find(|a| a.id == "overrings-of-dx").ok_or("missing")?;
    let n = a.valuations.as_ref().map_or(0, Vec::len);
    check(n >= 20, format!("only {n} valuations"))?;
    check(a.witness.as_deref() == Some("ideal(X)"), "witness F is not (X)")?;
    r.pass("overrings-of-dx")
}

fn criterion8(r: &Run) -> Result<String, String> {
    r.pass("conductor-inverse")?;
    r.pass("double-dual")?;
    let m = r.pass("nagata-maximal-trace")?;
    r.pass("quasi-v-maximal")?;
    // direct cross-check of the two routes on the primes above 2, 3 and 5
    let d = Domain::from_spec(&DomainSpec::Quadratic { d: -3 }).map_err(|e| e.to_string())?;
    let cands: Vec<PrimeIdeal> = [2, 3, 5].iter().flat_map(|p| PrimeIdeal::above(&d, &(*p).into())).collect();
    let v = SemistarOp::v();
    let trace = na_maximal_trace(&d, &v, &cands).map_err(|e| e.to_string())?;
    let quasi = quasi_star_spectrum(&d, &v.finite(), &cands).map_err(|e| e.to_string())?;
    check(same_primes(&d, &trace.maximal, &quasi.maximal) && trace.consistent(), "trace and quasi test disagree")?;
    Ok(m)
}

fn criterion9(runs: &BTreeMap<&str, Run>, total: Duration) -> Result<String, String> {
    check(total < Duration::from_secs(60), format!("suite took {total:?}"))?;
    let s = engine_stats();
    check(s.instances > 0, "no Gröbner instance recorded")?;
    check(s.max_vars <= 4 && s.max_input_degree <= 8, format!("{s:?}"))?;
    let slowest = runs.values().max_by_key(|r| r.wall).unwrap();
    Ok(format!(
        "suite {total:?} (slowest {} {:?}); {} Gröbner instances, ≤{} variables, degree ≤{}",
        slowest.report.scenario, slowest.wall, s.instances, s.max_vars, s.max_input_degree
    ))
}

#[test]
fn acceptance() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let start = Instant::now();
    let mut runs = BTreeMap::new();
    for name in BUNDLED {
        let scenario = Scenario::load(&dir.join(format!("{name}.json"))).unwrap();
        let t = Instant::now();
        let report = run_scenario(&scenario, None, 0).unwrap();
        runs.insert(name, Run { scenario, report, wall: t.elapsed() });
    }
    let total = start.elapsed();
    let results = [
        criterion1(&runs["ex51"]),
        criterion2(&runs["ex53"]),
        criterion3(&runs["ex52"]),
        criterion4(&runs["prop33"], &runs["thm37"]),
        criterion5(&runs["cor45"], &runs["thm37"]),
        criterion6(&runs["prop56"]),
        criterion7(&runs["thm38"]),
        criterion8(&runs["thm37"]),
        criterion9(&runs, total),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(note) => println!("criterion {}: PASS  {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {why}", i + 1);
            }
        }
    }
    for (name, r) in &runs {
        if let Err(why) = r.all_pass() {
            failed += 1;
            println!("scenario {name}: FAIL  {why}");
        }
    }
    assert_eq!(failed, 0);
}
