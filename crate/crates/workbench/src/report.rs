//! Run reports. Every number is written as an exact rational string `p/q`.

use std::fmt::Write as _;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// The check could not run, e.g. an unsupported operation.
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionReport {
    pub id: String,
    pub kind: String,
    pub verdict: Outcome,
    pub witness: Option<String>,
    pub millis: String,
    pub origin: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub tool_version: String,
    pub domain: String,
    pub seed: String,
    /// Candidate sets with the argument for their completeness.
    #[serde(default)]
    pub provenance: Vec<(String, String)>,
    pub assertions: Vec<AssertionReport>,
    /// `passed/total`.
    pub summary: String,
}

/// `p/q` in lowest terms with `q > 0`; integers are written `n/1`.
pub fn rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn int(n: u64) -> String {
    rat(&BigRational::from_integer(BigInt::from(n)))
}

/// Milliseconds as an exact rational, at microsecond resolution.
pub fn millis(t: Duration) -> String {
    rat(&BigRational::new(BigInt::from(t.as_micros()), BigInt::from(1000)))
}

/// Parses a `p/q` string back into a rational.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    s.parse().ok()
}

impl Report {
    pub fn passed(&self) -> usize {
        self.assertions.iter().filter(|a| a.verdict == Outcome::Pass).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.assertions.len()
    }

    pub fn summarize(&mut self) {
        self.summary = format!("{}/{}", self.passed(), self.assertions.len());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// The report with timings blanked, for determinism comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for a in &mut r.assertions {
            a.millis = "0/1".into();
        }
        r
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} on {} (seed {})", self.scenario, self.domain, self.seed);
        for (name, note) in &self.provenance {
            let _ = writeln!(out, "  candidates {name}: {note}");
        }
        let width = self.assertions.iter().map(|a| a.id.len()).max().unwrap_or(0);
        for a in &self.assertions {
            let ms = parse_rat(&a.millis).map_or_else(|| a.millis.clone(), |r| format!("{:.1}", to_f64(&r)));
            let tag = match a.verdict {
                Outcome::Pass => "pass ",
                Outcome::Fail => "FAIL ",
                Outcome::Error => "ERROR",
            };
            let _ = writeln!(out, "  {tag} {:width$}  {:<18} {ms:>9} ms", a.id, a.kind);
            if let Some(w) = &a.witness {
                let _ = writeln!(out, "        witness: {w}");
            }
            for d in &a.details {
                let _ = writeln!(out, "        {d}");
            }
        }
        let _ = writeln!(out, "summary: {} passed", self.summary);
        out
    }
}

fn to_f64(r: &BigRational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_fractions() {
        assert_eq!(int(7), "7/1");
        assert_eq!(millis(Duration::from_micros(1500)), "3/2");
        assert_eq!(rat(&BigRational::new((-4).into(), 6.into())), "-2/3");
        assert_eq!(parse_rat("3/2"), Some(BigRational::new(3.into(), 2.into())));
    }

    #[test]
    fn empty_report_round_trips() {
        let mut r = Report {
            scenario: "empty".into(),
            tool_version: "0".into(),
            domain: "Z".into(),
            seed: int(0),
            provenance: vec![],
            assertions: vec![],
            summary: String::new(),
        };
        r.summarize();
        assert_eq!(r.summary, "0/0");
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert!(r.to_text().contains("summary: 0/0"));
    }
}
