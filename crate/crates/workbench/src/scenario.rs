//! Versioned scenario files.

use std::collections::BTreeMap;
use std::path::Path;

use semistar_core::domains::DomainSpec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Defs, ExprError};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported scenario version {0}; this build reads version {SCENARIO_VERSION}")]
    Version(u32),
    #[error("assertion '{id}': {msg}")]
    Assertion { id: String, msg: String },
    #[error("duplicate assertion id '{0}'")]
    DuplicateId(String),
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("{0}")]
    Expr(#[from] ExprError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSet {
    pub primes: Vec<String>,
    /// Why the list contains every prime that matters.
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub domain: DomainSpec,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub primes: BTreeMap<String, String>,
    #[serde(default)]
    pub candidates: BTreeMap<String, CandidateSet>,
    #[serde(default)]
    pub valuations: BTreeMap<String, String>,
    #[serde(default)]
    pub ideals: BTreeMap<String, String>,
    #[serde(default)]
    pub ops: BTreeMap<String, String>,
    #[serde(default)]
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    ClosureEquals,
    Membership,
    MSetEquals,
    OpOrder,
    Axioms,
    Eab,
    NaKrChain,
    ValuationOverring,
    BezoutCombine,
    NaEquality,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::ClosureEquals => "closure-equals",
            Kind::Membership => "membership",
            Kind::MSetEquals => "m-set-equals",
            Kind::OpOrder => "op-order",
            Kind::Axioms => "axioms",
            Kind::Eab => "eab",
            Kind::NaKrChain => "na-kr-chain",
            Kind::ValuationOverring => "valuation-overring",
            Kind::BezoutCombine => "bezout-combine",
            Kind::NaEquality => "na-equality",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Na,
    Kr,
}

/// Expected outcome; its shape depends on the assertion kind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expect {
    Bool(bool),
    Text(String),
    List(Vec<String>),
}

/// One check. Which operand fields are required depends on `kind`; the
/// runner rejects missing or superfluous ones before anything executes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub id: String,
    pub kind: Kind,
    /// Free-text note on where the expectation comes from.
    pub origin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Ring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<String>>,
    /// A prime `P`; valuation-overring expectations become "V ⊇ D_P".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overring_of: Option<String>,
    /// Use the maximal-ideal trace of the Nagata ring for m-set-equals.
    #[serde(default)]
    pub trace: bool,
    /// Operation standing for `★~` in na-kr-chain; `w(op)` by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilde: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
    /// Expected witness ideal: `H` for membership, `F` for failed overring tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Expected separating element for na-equality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separator: Option<String>,
    /// Wall-clock bound in milliseconds; exceeding it fails the assertion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_millis: Option<u64>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ConfigError> {
        let s: Scenario = serde_json::from_str(text)?;
        if s.version != SCENARIO_VERSION {
            return Err(ConfigError::Version(s.version));
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &s.assertions {
            if !seen.insert(a.id.as_str()) {
                return Err(ConfigError::DuplicateId(a.id.clone()));
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Scenario, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn defs(&self) -> Defs {
        Defs {
            primes: self.primes.clone(),
            candidates: self.candidates.iter().map(|(k, v)| (k.clone(), v.primes.clone())).collect(),
            valuations: self.valuations.clone(),
            ideals: self.ideals.clone(),
            ops: self.ops.clone(),
        }
    }
}
