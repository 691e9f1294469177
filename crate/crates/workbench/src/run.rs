//! Binding and execution of scenario assertions.
//!
//! Binding parses every operand before anything runs, so configuration
//! errors never surface halfway through a run. Execution is parallel across
//! assertions; each draws its samples from its own seed, so the report does
//! not depend on scheduling.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use semistar_core::domains::{Domain, FractionalIdeal, KElem, PrimeIdeal, ValuationSpec};
use semistar_core::exact::MultiPoly;
use semistar_core::function_rings::{
    kr_bezout_combine, kr_member, na_equal_iff_m, na_maximal_trace, na_member, recheck_kr, recheck_na,
    sample_rational_function, KrOptions, MembershipCertificate, RationalFunctionElem, Verdict,
};
use semistar_core::semistar::checks::check_axioms_with;
use semistar_core::semistar::quasi::same_primes;
use semistar_core::semistar::sample::seeded_map;
use semistar_core::semistar::{
    check_eab, compare_ops, is_star_valuation_overring, quasi_star_spectrum, ClosureResult, Grade, OpKind, OpOrder,
    Sampler, SemistarError, SemistarOp,
};

use crate::expr::{show_primes, Env, Oracle};
use crate::report::{self, AssertionReport, Outcome, Report};
use crate::scenario::{Assertion, ConfigError, Expect, Kind, Ring, Scenario};

type Exec<T> = std::result::Result<T, SemistarError>;

/// Outcome of one executed check before timing is attached.
struct Finding {
    pass: bool,
    witness: Option<String>,
    details: Vec<String>,
}

impl Finding {
    fn new(pass: bool, witness: Option<String>) -> Finding {
        Finding {
            pass,
            witness,
            details: vec![],
        }
    }

    fn note(mut self, line: impl Into<String>) -> Finding {
        self.details.push(line.into());
        self
    }
}

enum OverringExpect {
    All(bool),
    OverringOf(PrimeIdeal),
}

enum Check {
    ClosureIdeal { o: Oracle, e: FractionalIdeal, target: FractionalIdeal, probes: usize },
    ClosureTrace { s: SemistarOp, e: FractionalIdeal, target: FractionalIdeal },
    ClosurePair { o1: Oracle, o2: Oracle, ideals: Vec<FractionalIdeal> },
    ClosureSampled { o1: Oracle, o2: Oracle, n: usize, atoms: Option<Vec<MultiPoly>> },
    MemberIdeal { o: Oracle, e: FractionalIdeal, z: KElem, expect: bool, witness: Option<FractionalIdeal> },
    MemberRing { ring: Ring, s: SemistarOp, f: RationalFunctionElem, expect: bool },
    MSet { s: SemistarOp, cands: Vec<PrimeIdeal>, expect: Vec<PrimeIdeal>, trace: bool },
    Order { s1: SemistarOp, s2: SemistarOp, ideals: Vec<FractionalIdeal>, n: usize, expect: OpOrder },
    Axioms { s: SemistarOp, n: usize, atoms: Option<Vec<MultiPoly>>, expect: bool },
    Eab { s: SemistarOp, triples: Vec<(FractionalIdeal, FractionalIdeal, FractionalIdeal)>, n: usize, expect: bool },
    Chain { s: SemistarOp, tilde: SemistarOp, n: usize },
    Overring { s: SemistarOp, vals: Vec<ValuationSpec>, ideals: Vec<FractionalIdeal>, expect: OverringExpect, witness: Option<String> },
    Bezout { s: SemistarOp, f: MultiPoly, g: MultiPoly, expect: bool },
    NaEq { s1: SemistarOp, s2: SemistarOp, cands: Vec<PrimeIdeal>, n: usize, expect: bool, separator: Option<RationalFunctionElem> },
}

struct Bound {
    a: Assertion,
    check: Check,
    seed: u64,
}

const FIELDS: [&str; 20] = [
    "op", "other", "ring", "ideal", "ideals", "elem", "f", "g", "triples", "candidates", "valuations", "overring_of",
    "trace", "tilde", "samples", "atoms", "seed", "expect", "witness", "separator",
];

fn present(a: &Assertion) -> Vec<&'static str> {
    let flags = [
        a.op.is_some(),
        a.other.is_some(),
        a.ring.is_some(),
        a.ideal.is_some(),
        a.ideals.is_some(),
        a.elem.is_some(),
        a.f.is_some(),
        a.g.is_some(),
        a.triples.is_some(),
        a.candidates.is_some(),
        a.valuations.is_some(),
        a.overring_of.is_some(),
        a.trace,
        a.tilde.is_some(),
        a.samples.is_some(),
        a.atoms.is_some(),
        a.seed.is_some(),
        a.expect.is_some(),
        a.witness.is_some(),
        a.separator.is_some(),
    ];
    FIELDS.iter().zip(flags).filter(|(_, on)| *on).map(|(f, _)| *f).collect()
}

fn allowed(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::ClosureEquals => &["op", "other", "ideal", "ideals", "samples", "atoms", "seed", "expect", "trace"],
        Kind::Membership => &["op", "ring", "ideal", "elem", "expect", "witness"],
        Kind::MSetEquals => &["op", "candidates", "expect", "trace"],
        Kind::OpOrder => &["op", "other", "ideals", "samples", "seed", "expect"],
        Kind::Axioms => &["op", "samples", "atoms", "seed", "expect"],
        Kind::Eab => &["op", "triples", "samples", "seed", "expect"],
        Kind::NaKrChain => &["op", "tilde", "samples", "seed"],
        Kind::ValuationOverring => &["op", "valuations", "ideals", "expect", "overring_of", "witness"],
        Kind::BezoutCombine => &["op", "f", "g", "expect"],
        Kind::NaEquality => &["op", "other", "candidates", "samples", "seed", "expect", "separator"],
    }
}

struct Binder<'a> {
    env: &'a Env<'a>,
    a: &'a Assertion,
}

impl<'a> Binder<'a> {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError::Assertion {
            id: self.a.id.clone(),
            msg: msg.into(),
        })
    }

    fn need<'f, T>(&self, v: &'f Option<T>, field: &str) -> Result<&'f T, ConfigError> {
        match v {
            Some(x) => Ok(x),
            None => self.fail(format!("{} needs '{field}'", self.a.kind.as_str())),
        }
    }

    fn expr<T>(&self, r: Result<T, crate::expr::ExprError>) -> Result<T, ConfigError> {
        r.or_else(|e| self.fail(e.to_string()))
    }

    fn op(&self) -> Result<SemistarOp, ConfigError> {
        self.expr(self.env.op(self.need(&self.a.op, "op")?))
    }

    fn other(&self) -> Result<SemistarOp, ConfigError> {
        self.expr(self.env.op(self.need(&self.a.other, "other")?))
    }

    fn ideal_list(&self, v: &Option<Vec<String>>) -> Result<Vec<FractionalIdeal>, ConfigError> {
        v.iter().flatten().map(|t| self.expr(self.env.ideal(t))).collect()
    }

    fn atoms(&self) -> Result<Option<Vec<MultiPoly>>, ConfigError> {
        let Some(list) = &self.a.atoms else { return Ok(None) };
        let mut out = Vec::new();
        for t in list {
            let z = self.expr(self.env.element(t))?;
            match self.env.d.k_to_d(&z) {
                Some(p) if !p.is_zero() => out.push(p),
                _ => return self.fail(format!("atom {t} is not a nonzero element of D")),
            }
        }
        if out.is_empty() {
            return self.fail("empty atom list");
        }
        Ok(Some(out))
    }

    fn expect_bool(&self, default: Option<bool>) -> Result<bool, ConfigError> {
        match (&self.a.expect, default) {
            (Some(Expect::Bool(b)), _) => Ok(*b),
            (None, Some(b)) => Ok(b),
            _ => self.fail("'expect' must be true or false"),
        }
    }

    fn expect_text(&self) -> Result<&'a str, ConfigError> {
        match &self.a.expect {
            Some(Expect::Text(t)) => Ok(t),
            _ => self.fail("'expect' must be a string"),
        }
    }

    fn candidates(&self) -> Result<Vec<PrimeIdeal>, ConfigError> {
        self.expr(self.env.primes(self.need(&self.a.candidates, "candidates")?))
    }

    fn bind(&self) -> Result<Check, ConfigError> {
        let a = self.a;
        let extra: Vec<&str> = present(a).into_iter().filter(|f| !allowed(a.kind).contains(f)).collect();
        if !extra.is_empty() {
            return self.fail(format!("{} does not take {}", a.kind.as_str(), extra.join(", ")));
        }
        let d = self.env.d;
        Ok(match a.kind {
            Kind::ClosureEquals if a.trace => {
                if a.other.is_some() || a.ideals.is_some() || a.samples.is_some() {
                    return self.fail("a trace comparison takes only op, ideal and expect");
                }
                Check::ClosureTrace {
                    s: self.op()?,
                    e: self.expr(self.env.ideal(self.need(&a.ideal, "ideal")?))?,
                    target: self.expr(self.env.ideal(self.expect_text()?))?,
                }
            }
            Kind::ClosureEquals => {
                let o1 = self.expr(self.env.oracle(self.need(&a.op, "op")?))?;
                match (&a.other, &a.ideal, &a.ideals, a.samples) {
                    (None, Some(e), None, probes) => Check::ClosureIdeal {
                        o: o1,
                        e: self.expr(self.env.ideal(e))?,
                        target: self.expr(self.env.ideal(self.expect_text()?))?,
                        probes: probes.unwrap_or(40),
                    },
                    (Some(o2), None, Some(_), None) => Check::ClosurePair {
                        o1,
                        o2: self.expr(self.env.oracle(o2))?,
                        ideals: self.ideal_list(&a.ideals)?,
                    },
                    (Some(o2), None, None, Some(n)) => Check::ClosureSampled {
                        o1,
                        o2: self.expr(self.env.oracle(o2))?,
                        n,
                        atoms: self.atoms()?,
                    },
                    _ => return self.fail("closure-equals takes ideal+expect, other+ideals, or other+samples"),
                }
            }
            Kind::Membership => {
                let expect = self.expect_bool(None)?;
                let elem = self.need(&a.elem, "elem")?;
                match a.ring {
                    Some(ring) => {
                        if a.ideal.is_some() || a.witness.is_some() {
                            return self.fail("ring membership takes no ideal or witness");
                        }
                        Check::MemberRing {
                            ring,
                            s: self.op()?,
                            f: self.expr(self.env.function(elem))?,
                            expect,
                        }
                    }
                    None => Check::MemberIdeal {
                        o: self.expr(self.env.oracle(self.need(&a.op, "op")?))?,
                        e: self.expr(self.env.ideal(self.need(&a.ideal, "ideal")?))?,
                        z: self.expr(self.env.element(elem))?,
                        expect,
                        witness: a.witness.as_ref().map(|w| self.expr(self.env.ideal(w))).transpose()?,
                    },
                }
            }
            Kind::MSetEquals => {
                let Some(Expect::List(list)) = &a.expect else {
                    return self.fail("'expect' must be a list of primes");
                };
                let expect = list.iter().map(|p| self.expr(self.env.prime(p))).collect::<Result<_, _>>()?;
                Check::MSet {
                    s: self.op()?,
                    cands: self.candidates()?,
                    expect,
                    trace: a.trace,
                }
            }
            Kind::OpOrder => {
                let expect = match self.expect_text()? {
                    "equal" => OpOrder::Equal,
                    "less" => OpOrder::Less,
                    "greater" => OpOrder::Greater,
                    "incomparable" => OpOrder::Incomparable,
                    other => return self.fail(format!("unknown order '{other}'")),
                };
                Check::Order {
                    s1: self.op()?,
                    s2: self.other()?,
                    ideals: self.ideal_list(&a.ideals)?,
                    n: a.samples.unwrap_or(if a.ideals.is_some() { 0 } else { 20 }),
                    expect,
                }
            }
            Kind::Axioms => Check::Axioms {
                s: self.op()?,
                n: a.samples.unwrap_or(100),
                atoms: self.atoms()?,
                expect: self.expect_bool(Some(true))?,
            },
            Kind::Eab => {
                let mut triples = Vec::new();
                for [e, f, g] in a.triples.iter().flatten() {
                    let i = |t: &String| self.expr(self.env.ideal(t));
                    triples.push((i(e)?, i(f)?, i(g)?));
                }
                if triples.is_empty() && a.samples.is_none() {
                    return self.fail("eab needs 'triples' or 'samples'");
                }
                Check::Eab {
                    s: self.op()?,
                    triples,
                    n: a.samples.unwrap_or(0),
                    expect: self.expect_bool(None)?,
                }
            }
            Kind::NaKrChain => {
                let s = self.op()?;
                let tilde = match &a.tilde {
                    Some(t) => self.expr(self.env.op(t))?,
                    None => s.w().or_else(|e| self.fail(e.to_string()))?,
                };
                Check::Chain {
                    s,
                    tilde,
                    n: a.samples.unwrap_or(50),
                }
            }
            Kind::ValuationOverring => {
                let vals = self.need(&a.valuations, "valuations")?;
                let vals: Vec<ValuationSpec> = vals.iter().map(|v| self.expr(self.env.valuation(v))).collect::<Result<_, _>>()?;
                let expect = match (&a.expect, &a.overring_of) {
                    (Some(Expect::Bool(b)), None) => OverringExpect::All(*b),
                    (None, Some(p)) => OverringExpect::OverringOf(self.expr(self.env.prime(p))?),
                    _ => return self.fail("valuation-overring takes exactly one of 'expect' (bool) and 'overring_of'"),
                };
                let mut ideals = self.ideal_list(&a.ideals)?;
                if ideals.is_empty() {
                    ideals = default_test_ideals(d);
                }
                Check::Overring {
                    s: self.op()?,
                    vals,
                    ideals,
                    expect,
                    witness: a.witness.as_ref().map(|w| self.expr(self.env.ideal(w)).map(|f| f.show(d))).transpose()?,
                }
            }
            Kind::BezoutCombine => {
                let poly = |t: &String| -> Result<MultiPoly, ConfigError> {
                    let e = self.expr(self.env.function(t))?;
                    if !e.den.is_constant() {
                        return self.fail(format!("{t} is not a polynomial"));
                    }
                    Ok(d.reduce(&e.num.scale(&e.den.constant_term().recip())))
                };
                Check::Bezout {
                    s: self.op()?,
                    f: poly(self.need(&a.f, "f")?)?,
                    g: poly(self.need(&a.g, "g")?)?,
                    expect: self.expect_bool(Some(true))?,
                }
            }
            Kind::NaEquality => Check::NaEq {
                s1: self.op()?,
                s2: self.other()?,
                cands: self.candidates()?,
                n: a.samples.unwrap_or(30),
                expect: self.expect_bool(None)?,
                separator: a.separator.as_ref().map(|t| self.expr(self.env.function(t))).transpose()?,
            },
        })
    }
}

/// Principal ideals of the sampling atoms, then the maximal ideal.
fn default_test_ideals(d: &Domain) -> Vec<FractionalIdeal> {
    let mut out: Vec<FractionalIdeal> = d
        .atoms()
        .into_iter()
        .filter_map(|a| FractionalIdeal::integral(d, vec![a]).ok())
        .collect();
    if let Some(m) = PrimeIdeal::center(d) {
        out.extend(FractionalIdeal::integral(d, m.gens).ok());
    }
    out
}

/// Elements near `e` and `target` on which two closures are compared.
fn probe_set(d: &Domain, ideals: &[&FractionalIdeal], seed: u64, n: usize) -> Vec<KElem> {
    let mut out: Vec<KElem> = Vec::new();
    let atoms: Vec<KElem> = d.atoms().iter().map(|a| d.k_from_d(a)).collect();
    for e in ideals {
        for g in e.elements(d) {
            for a in &atoms {
                out.push(d.k_mul(&g, a));
                if let Ok(q) = d.k_div(&g, a) {
                    out.push(q);
                }
            }
            out.push(g);
        }
    }
    let mut s = Sampler::new(d, seed, u64::MAX);
    out.extend((0..n).map(|_| s.element()));
    let mut seen: Vec<KElem> = Vec::new();
    for z in out {
        if !seen.iter().any(|y| d.k_eq(y, &z)) {
            seen.push(z);
        }
    }
    seen
}

fn show_closure(d: &Domain, c: &ClosureResult) -> String {
    let body = match c.presentation() {
        Some(p) => p.show(d),
        None if c.is_whole() => "K".into(),
        None => match c.closure.contraction(d) {
            Some(t) => format!("oracle with trace {} on D", t.show(d)),
            None => "oracle".into(),
        },
    };
    format!("{body} [{}]", c.grade)
}

/// Compares two oracles on `e`: exactly on presentations, else on probes.
/// Returns a disagreement, and whether the comparison was exact.
fn compare_closures(d: &Domain, o1: &Oracle, o2: &Oracle, e: &FractionalIdeal, seed: u64) -> Exec<(Option<String>, bool)> {
    if let (Oracle::Op(s1), Oracle::Op(s2)) = (o1, o2) {
        let (c1, c2) = (s1.apply(d, e)?, s2.apply(d, e)?);
        let exact = c1.grade == Grade::Exact && c2.grade == Grade::Exact;
        let shown = || format!("{}: {} vs {}", e.show(d), show_closure(d, &c1), show_closure(d, &c2));
        if c1.is_whole() || c2.is_whole() {
            let same = c1.is_whole() && c2.is_whole();
            return Ok(((!same).then(shown), exact));
        }
        if let (Some(p1), Some(p2)) = (c1.presentation(), c2.presentation()) {
            if !p1.same(d, p2) {
                return Ok((Some(shown()), exact));
            }
            if !exact {
                return Ok((Some(format!("{} (equal lower bounds only)", shown())), false));
            }
            return Ok((None, true));
        }
    }
    for z in probe_set(d, &[e], seed, 8) {
        let (a, b) = (o1.member(d, e, &z)?.holds, o2.member(d, e, &z)?.holds);
        match (a, b) {
            (Some(x), Some(y)) if x == y => {}
            _ => {
                let v = |h: Option<bool>| h.map_or("unknown".to_string(), |b| b.to_string());
                return Ok((Some(format!("{} ∋? {}: {} vs {}", e.show(d), d.show_k(&z), v(a), v(b))), false));
            }
        }
    }
    Ok((None, false))
}

/// The `H` behind `z ∈ F^{★_a}`: the first logged pool member with
/// `(zH)^★ ⊆ (FH)^★`, re-verified here.
fn a_witness(d: &Domain, s: &SemistarOp, f: &FractionalIdeal, z: &KElem, c: &ClosureResult) -> Exec<Option<FractionalIdeal>> {
    let OpKind::A { base, .. } = &s.kind else {
        return Ok(None);
    };
    for w in &c.witnesses {
        let Some(h) = &w.h else { continue };
        if base.closure_subset(d, &h.scale(d, z)?, &f.product(d, h))? {
            return Ok(Some(h.clone()));
        }
    }
    Ok(None)
}

fn verdict_bool(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Yes => Some(true),
        Verdict::No => Some(false),
        Verdict::Unknown => None,
    }
}

fn recheck(d: &Domain, ring: Ring, s: &SemistarOp, f: &RationalFunctionElem, cert: &MembershipCertificate) -> Exec<bool> {
    if cert.verdict != Verdict::Yes {
        return Ok(true);
    }
    match ring {
        Ring::Na => recheck_na(d, s, f, cert),
        Ring::Kr => recheck_kr(d, s, f, cert),
    }
}

fn execute(d: &Domain, check: &Check, seed: u64) -> Exec<Finding> {
    Ok(match check {
        Check::ClosureIdeal { o, e, target, probes } => match o {
            Oracle::Op(s) => {
                let c = s.apply(d, e)?;
                let shown = show_closure(d, &c);
                match c.presentation() {
                    Some(p) if c.grade == Grade::Exact => Finding::new(p.same(d, target), Some(format!("closure {shown}"))),
                    Some(_) => Finding::new(false, Some(format!("closure {shown}: a lower bound does not decide equality"))),
                    None if c.is_whole() => Finding::new(false, Some("closure is K".into())),
                    None => probe_equal(d, o, e, target, seed, *probes)?.note(format!("closure {shown}")),
                }
            }
            _ => probe_equal(d, o, e, target, seed, *probes)?,
        },
        Check::ClosureTrace { s, e, target } => {
            let c = s.apply(d, e)?;
            match c.closure.contraction(d) {
                Some(t) if c.grade == Grade::Exact => {
                    Finding::new(t.same(d, target), Some(format!("E^★ ∩ D = {}", t.show(d))))
                }
                Some(t) => Finding::new(false, Some(format!("only a lower bound {} for the trace", t.show(d)))),
                None => Finding::new(false, Some("the trace on D is not computable for this closure".into())),
            }
        }
        Check::ClosurePair { o1, o2, ideals } => {
            let mut exact = 0;
            for (i, e) in ideals.iter().enumerate() {
                let (bad, ex) = compare_closures(d, o1, o2, e, seed.wrapping_add(i as u64))?;
                if let Some(b) = bad {
                    return Ok(Finding::new(false, Some(b)));
                }
                exact += ex as usize;
            }
            Finding::new(true, None).note(format!("{} ideals, {exact} compared on exact presentations", ideals.len()))
        }
        Check::ClosureSampled { o1, o2, n, atoms } => {
            let rows = seeded_map(d, seed, *n, atoms.as_deref(), |_, s| -> Exec<(Option<String>, bool)> {
                let e = s.ideal();
                let z = s.element();
                let (a, b) = (o1.member(d, &e, &z)?.holds, o2.member(d, &e, &z)?.holds);
                let v = |h: Option<bool>| h.map_or("unknown".to_string(), |b| b.to_string());
                Ok(match (a, b) {
                    (Some(x), Some(y)) if x == y => (None, x),
                    _ => (Some(format!("{} ∋? {}: {} vs {}", e.show(d), d.show_k(&z), v(a), v(b))), false),
                })
            });
            let mut yes = 0;
            for r in rows {
                let (bad, inside) = r?;
                if let Some(b) = bad {
                    return Ok(Finding::new(false, Some(b)));
                }
                yes += inside as usize;
            }
            Finding::new(true, None).note(format!(
                "{n} sampled (E, z) pairs agree elementwise, {yes} inside ({} vs {})",
                o1.name(d),
                o2.name(d)
            ))
        }
        Check::MemberIdeal { o, e, z, expect, witness } => {
            let ans = o.member(d, e, z)?;
            let mut f = match ans.holds {
                None => Finding::new(false, Some("inconclusive: only a lower bound is known".into())),
                Some(h) => Finding::new(h == *expect, None),
            };
            if let Some(c) = &ans.closure {
                f = f.note(format!("closure {}", show_closure(d, c)));
                if let Oracle::Op(s) = o {
                    if let Some(h) = a_witness(d, s, e, z, c)? {
                        f.witness = Some(format!("H = {}", h.show(d)));
                        if let Some(want) = witness {
                            f.pass &= h.same(d, want);
                        }
                    } else if witness.is_some() {
                        f.pass = false;
                        f.witness = Some("no logged witness H accounts for the element".into());
                    }
                }
            }
            if let Some(cert) = &ans.cert {
                f.witness = Some(cert.describe(d));
            }
            f
        }
        Check::MemberRing { ring, s, f, expect } => {
            let cert = match ring {
                Ring::Na => na_member(d, s, f)?,
                Ring::Kr => kr_member(d, s, f, &KrOptions::new(d))?,
            };
            let rechecked = recheck(d, *ring, s, f, &cert)?;
            let pass = verdict_bool(cert.verdict) == Some(*expect) && rechecked;
            let mut out = Finding::new(pass, Some(cert.describe(d)));
            if !rechecked {
                out = out.note("the yes-certificate did not re-verify");
            }
            out
        }
        Check::MSet { s, cands, expect, trace } => {
            if *trace {
                let t = na_maximal_trace(d, s, cands)?;
                let mut out = Finding::new(
                    same_primes(d, &t.maximal, expect) && t.consistent(),
                    Some(format!("M = {}", show_primes(d, &t.maximal))),
                );
                for c in &t.checks {
                    out = out.note(format!(
                        "{}: content in N {}, 1 in Q·Na {}",
                        c.prime.show(d),
                        c.content_in_n,
                        c.one_in_extension
                    ));
                }
                out.note(if t.certain { "quasi verdicts exact" } else { "some quasi verdicts sampled" })
            } else {
                let spec = quasi_star_spectrum(d, &s.finite(), cands)?;
                let mut out = Finding::new(
                    same_primes(d, &spec.maximal, expect),
                    Some(format!("M = {}", show_primes(d, &spec.maximal))),
                );
                out = out.note(format!("quasi among candidates: {}", show_primes(d, &spec.quasi)));
                out.note(if spec.certain { "quasi verdicts exact" } else { "some quasi verdicts sampled" })
            }
        }
        Check::Order { s1, s2, ideals, n, expect } => {
            let mut all = ideals.clone();
            let mut s = Sampler::new(d, seed, 0);
            all.extend((0..*n).map(|_| s.ideal()));
            let ev = compare_ops(d, s1, s2, &all, seed)?;
            let name = |o: OpOrder| format!("{o:?}").to_lowercase();
            let wit = ev
                .above
                .first()
                .map(|(e, z)| format!("{z} ∈ {e}^{{{}}} but not {e}^{{{}}}", s2.name(d), s1.name(d)))
                .or_else(|| {
                    ev.below
                        .first()
                        .map(|(e, z)| format!("{z} ∈ {e}^{{{}}} but not {e}^{{{}}}", s1.name(d), s2.name(d)))
                });
            Finding::new(ev.order == *expect, wit).note(format!(
                "order {} on {} ideals ({})",
                name(ev.order),
                all.len(),
                if ev.exact { "exact" } else { "partly probed" }
            ))
        }
        Check::Axioms { s, n, atoms, expect } => {
            let rep = check_axioms_with(d, s, seed, *n, atoms.as_deref());
            let first_bad = rep
                .results
                .iter()
                .find_map(|r| r.counterexample.as_ref().map(|c| format!("{}: {c}", r.axiom)));
            let mut out = Finding::new(rep.passed() == *expect && rep.skipped < rep.samples, first_bad);
            for r in &rep.results {
                out = out.note(format!("{}: {} checked", r.axiom, r.checked));
            }
            out.note(format!("{} samples, {} skipped", rep.samples, rep.skipped))
        }
        Check::Eab { s, triples, n, expect } => {
            let mut all = triples.clone();
            let mut sm = Sampler::new(d, seed, 0);
            all.extend((0..*n).map(|_| (sm.integral_ideal(), sm.integral_ideal(), sm.integral_ideal())));
            let rep = check_eab(d, s, &all)?;
            let holds = rep.violations.is_empty();
            Finding::new(holds == *expect, rep.violations.first().map(|v| format!("cancellation fails at {v}")))
                .note(format!("{} triples, {} with (EF)^★ ⊆ (EG)^★", rep.checked, rep.applicable))
        }
        Check::Chain { s, tilde, n } => chain(d, s, tilde, *n, seed)?,
        Check::Overring { s, vals, ideals, expect, witness } => {
            let mut out = Finding::new(true, None);
            let mut agree = 0;
            for v in vals {
                let want = match expect {
                    OverringExpect::All(b) => *b,
                    OverringExpect::OverringOf(p) => v.is_overring_of_localization(d, p),
                };
                let got = is_star_valuation_overring(d, v, s, ideals)?;
                let mut ok = got.holds == want;
                let shown = match &got.witness {
                    Some((f, z)) => {
                        if let Some(w) = witness {
                            ok &= f == w;
                        }
                        format!("fails: {z} ∈ {f}^★ \\ {f}V")
                    }
                    None if got.relative_to_samples => "holds on the test ideals".into(),
                    None => "holds".into(),
                };
                if !ok && out.pass {
                    out.pass = false;
                    out.witness = Some(format!("{}: expected {want}, {shown}", v.show(d)));
                }
                agree += ok as usize;
                out = out.note(format!("{}: expected {want}, {shown}", v.show(d)));
            }
            let mut out = out.note(format!("{agree}/{} valuations agree", vals.len()));
            if out.witness.is_none() {
                out.witness = Some(format!("{agree}/{} agree", vals.len()));
            }
            out
        }
        Check::Bezout { s, f, g, expect } => {
            let ev = kr_bezout_combine(d, s, f, g, &KrOptions::new(d))?;
            let rf = |x: &MultiPoly| RationalFunctionElem::new(d, x.clone(), ev.h.clone());
            let pass = ev.holds() == *expect
                && recheck(d, Ring::Kr, s, &rf(f)?, &ev.f_over_h)?
                && recheck(d, Ring::Kr, s, &rf(g)?, &ev.g_over_h)?;
            Finding::new(pass, Some(format!("h = {}", semistar_core::function_rings::show_fpoly(d, &ev.h))))
                .note(format!("f/h: {}", ev.f_over_h.describe(d)))
                .note(format!("g/h: {}", ev.g_over_h.describe(d)))
        }
        Check::NaEq { s1, s2, cands, n, expect, separator } => {
            let samples: Vec<RationalFunctionElem> = seeded_map(d, seed, *n, None, |_, s| sample_rational_function(s));
            let cmp = na_equal_iff_m(d, s1, s2, cands, &samples)?;
            let mut pass = cmp.consistent() && cmp.unknown == 0 && cmp.na_equal() == *expect;
            let witness = match &cmp.separator {
                Some(sep) => {
                    if let Some(want) = separator {
                        pass &= sep.elem.same(d, want);
                    }
                    Some(format!("{}: {} vs {}", sep.elem.show(d), sep.first, sep.second))
                }
                None => {
                    pass &= separator.is_none();
                    cmp.disagreements.first().map(|e| format!("memberships differ at {}", e.show(d)))
                }
            };
            Finding::new(pass, witness)
                .note(format!("M1 = {}, M2 = {}", show_primes(d, &cmp.m1), show_primes(d, &cmp.m2)))
                .note(format!("{n} sampled functions, {} disagreements, {} unknown", cmp.disagreements.len(), cmp.unknown))
        }
    })
}

/// Equality of an oracle's closure of `e` with `target`: the generators of
/// `target` must lie inside, and probe memberships must match.
fn probe_equal(d: &Domain, o: &Oracle, e: &FractionalIdeal, target: &FractionalIdeal, seed: u64, n: usize) -> Exec<Finding> {
    for g in target.elements(d) {
        if o.member(d, e, &g)?.holds != Some(true) {
            return Ok(Finding::new(false, Some(format!("{} is not confirmed inside", d.show_k(&g)))));
        }
    }
    let probes = probe_set(d, &[e, target], seed, n);
    for z in &probes {
        let want = target.contains(d, z);
        let got = o.member(d, e, z)?.holds;
        if got != Some(want) {
            let got = got.map_or("unknown".to_string(), |b| b.to_string());
            return Ok(Finding::new(false, Some(format!("{}: {got}, expected {want}", d.show_k(z)))));
        }
    }
    Ok(Finding::new(true, Some(format!("{} equals {}", o.name(d), target.show(d))))
        .note(format!("generators confirmed; {} probes agree (relative to probes)", probes.len())))
}

fn chain(d: &Domain, s: &SemistarOp, tilde: &SemistarOp, n: usize, seed: u64) -> Exec<Finding> {
    let opts = KrOptions::new(d);
    let rows = seeded_map(d, seed, n, None, |_, sm| -> Exec<(Verdict, Verdict, Verdict, Option<String>)> {
        let f = sample_rational_function(sm);
        let na = na_member(d, s, &f)?;
        let nt = na_member(d, tilde, &f)?;
        let kr = kr_member(d, s, &f, &opts)?;
        let mut bad = None;
        if !recheck(d, Ring::Na, s, &f, &na)? || !recheck(d, Ring::Kr, s, &f, &kr)? {
            bad = Some(format!("a yes-certificate at {} did not re-verify", f.show(d)));
        } else if na.verdict != nt.verdict {
            bad = Some(format!("{}: Na(★) {} but Na(★~) {}", f.show(d), na.verdict, nt.verdict));
        } else if na.verdict == Verdict::Yes && kr.verdict == Verdict::No {
            bad = Some(format!("{} lies in Na(★) but Kr says no ({})", f.show(d), kr.describe(d)));
        } else if na.verdict == Verdict::Unknown || (na.verdict == Verdict::Yes && kr.verdict == Verdict::Unknown) {
            bad = Some(format!("{}: undecided (Na {}, Kr {})", f.show(d), na.verdict, kr.verdict));
        }
        Ok((na.verdict, nt.verdict, kr.verdict, bad))
    });
    let (mut in_na, mut kr_only, mut outside, mut undecided) = (0, 0, 0, 0);
    for r in rows {
        let (na, _, kr, bad) = r?;
        if let Some(b) = bad {
            return Ok(Finding::new(false, Some(b)));
        }
        match (na, kr) {
            (Verdict::Yes, _) => in_na += 1,
            (_, Verdict::Yes) => kr_only += 1,
            (_, Verdict::No) => outside += 1,
            _ => undecided += 1,
        }
    }
    Ok(Finding::new(true, None).note(format!(
        "{n} sampled functions: {in_na} in Na(★) = Na(★~) ⊆ Kr(★), {kr_only} in Kr(★) only, {outside} outside Kr(★), {undecided} undecided in Kr(★)"
    )))
}

/// Seed precedence: an explicit override, then the scenario's seed, then the
/// caller's default.
pub fn run_scenario(s: &Scenario, seed_override: Option<u64>, default_seed: u64) -> Result<Report, ConfigError> {
    let d = Domain::from_spec(&s.domain).map_err(|e| ConfigError::Domain(e.to_string()))?;
    let defs = s.defs();
    let env = Env::new(&d, &defs);
    for text in defs.ops.values() {
        env.op(text)?;
    }
    for text in defs.ideals.values() {
        env.ideal(text)?;
    }
    for text in defs.primes.values() {
        env.prime(text)?;
    }
    for text in defs.valuations.values() {
        env.valuation(text)?;
    }
    for name in defs.candidates.keys() {
        env.primes(name)?;
    }
    let seed = seed_override.or(s.seed).unwrap_or(default_seed);
    let bound: Vec<Bound> = s
        .assertions
        .iter()
        .map(|a| {
            Ok(Bound {
                check: Binder { env: &env, a }.bind()?,
                seed: seed_override.or(a.seed).unwrap_or(seed),
                a: a.clone(),
            })
        })
        .collect::<Result<_, ConfigError>>()?;
    let assertions: Vec<AssertionReport> = bound.par_iter().map(|b| run_one(&d, b)).collect();
    let mut report = Report {
        scenario: s.name.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        domain: d.describe(),
        seed: report::int(seed),
        provenance: s.candidates.iter().map(|(k, v)| (k.clone(), v.provenance.clone())).collect(),
        assertions,
        summary: String::new(),
    };
    report.summarize();
    Ok(report)
}

fn run_one(d: &Domain, b: &Bound) -> AssertionReport {
    let start = Instant::now();
    let result = execute(d, &b.check, b.seed);
    let took = start.elapsed();
    let (verdict, witness, mut details) = match result {
        Ok(f) => (if f.pass { Outcome::Pass } else { Outcome::Fail }, f.witness, f.details),
        Err(e) => (Outcome::Error, Some(format!("error: {e}")), vec![]),
    };
    let mut verdict = verdict;
    if let Some(limit) = b.a.max_millis {
        if took > Duration::from_millis(limit) {
            verdict = Outcome::Fail;
            details.push(format!("time limit of {limit} ms exceeded"));
        }
    }
    AssertionReport {
        id: b.a.id.clone(),
        kind: b.a.kind.as_str().to_string(),
        verdict,
        witness,
        millis: report::millis(took),
        origin: b.a.origin.clone(),
        details,
    }
}
