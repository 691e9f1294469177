//! The expression language shared by scenario files and the command line.
//!
//! ```text
//! op      := NAME | d | v | t | b | ex53 | w(op) | fin(op) | tilde(op, mset)
//!          | a(op [, [budget=]N] [, aux=[ideal, ...]]) | spectral(primes)
//!          | extend(overring) | restrict(op, overring)
//!          | valfam([val, ...] [, primes=primes])
//! oracle  := op | na(op) | kr(op)
//! ideal   := NAME | ideal(elem, ...) | frac(ideal, elem) | dual(ideal)
//!          | sum(ideal, ideal) | prod(ideal, ideal) | pow(ideal, N)
//!          | colon(ideal, ideal) | close(op, ideal)
//! prime   := NAME | (elem, ...) | prime(elem, ...) | asserted(elem, ...) | elem
//! primes  := NAME | [prime, ...] | above(N, ...)
//! mset    := primes | max(primes)
//! val     := NAME | dvr(elem) | weight(q, ...) | lex([i, ...], [i, ...])
//! overring:= localize(prime) | D | K
//! ```
//!
//! Elements are rational expressions in the domain's variables; `$X` names
//! the function-ring variable.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use semistar_core::domains::{parse_element, Domain, DomainError, FractionalIdeal, KElem, PrimeIdeal, ValuationSpec};
use semistar_core::function_rings::{
    extend_contract_kr, extend_contract_na, KrOptions, MembershipCertificate, RationalFunctionElem,
};
use semistar_core::semistar::{quasi_star_spectrum, Budget, ClosureResult, Overring, SemistarError, SemistarOp};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at {pos} in '{text}': {msg}")]
    Parse { text: String, pos: usize, msg: String },
    #[error("unbound name '{0}'")]
    Unbound(String),
    #[error("definition of '{0}' refers to itself")]
    Cycle(String),
    #[error("in '{text}': {source}")]
    Eval { text: String, source: SemistarError },
}

type Result<T> = std::result::Result<T, ExprError>;

/// Named definitions a scenario makes available to expressions.
#[derive(Clone, Debug, Default)]
pub struct Defs {
    pub primes: BTreeMap<String, String>,
    pub candidates: BTreeMap<String, Vec<String>>,
    pub valuations: BTreeMap<String, String>,
    pub ideals: BTreeMap<String, String>,
    pub ops: BTreeMap<String, String>,
}

/// A membership oracle for `E ↦ E'`: a semistar operation or the trace of a
/// function ring.
#[derive(Clone, Debug)]
pub enum Oracle {
    Op(SemistarOp),
    Na(SemistarOp),
    Kr(SemistarOp),
}

/// Three-valued membership, with the evidence behind it.
#[derive(Clone, Debug)]
pub struct Answer {
    pub holds: Option<bool>,
    pub closure: Option<ClosureResult>,
    pub cert: Option<MembershipCertificate>,
}

impl Oracle {
    pub fn name(&self, d: &Domain) -> String {
        match self {
            Oracle::Op(s) => s.name(d),
            Oracle::Na(s) => format!("na({})", s.name(d)),
            Oracle::Kr(s) => format!("kr({})", s.name(d)),
        }
    }

    pub fn member(&self, d: &Domain, e: &FractionalIdeal, z: &KElem) -> std::result::Result<Answer, SemistarError> {
        use semistar_core::function_rings::Verdict;
        let from_cert = |cert: MembershipCertificate| Answer {
            holds: match cert.verdict {
                Verdict::Yes => Some(true),
                Verdict::No => Some(false),
                Verdict::Unknown => None,
            },
            closure: None,
            cert: Some(cert),
        };
        Ok(match self {
            Oracle::Op(s) => {
                let c = s.apply(d, e)?;
                let yes = c.contains(d, z)?;
                let holds = if yes || c.grade == semistar_core::semistar::Grade::Exact { Some(yes) } else { None };
                Answer {
                    holds,
                    closure: Some(c),
                    cert: None,
                }
            }
            Oracle::Na(s) => from_cert(extend_contract_na(s, e).member(d, z)?),
            Oracle::Kr(s) => from_cert(extend_contract_kr(s, e, &KrOptions::new(d)).member(d, z)?),
        })
    }
}

/// Result of [`Env::eval`].
#[derive(Clone, Debug)]
pub enum Value {
    Ideal(FractionalIdeal),
    Element(KElem),
    Function(RationalFunctionElem),
    Op(SemistarOp),
    Oracle(Oracle),
    Primes(Vec<PrimeIdeal>),
    Valuation(ValuationSpec),
}

impl Value {
    pub fn show(&self, d: &Domain) -> String {
        match self {
            Value::Ideal(e) => e.show(d),
            Value::Element(z) => d.show_k(z),
            Value::Function(f) => f.show(d),
            Value::Op(s) => s.name(d),
            Value::Oracle(o) => o.name(d),
            Value::Primes(ps) => show_primes(d, ps),
            Value::Valuation(v) => v.show(d),
        }
    }
}

pub fn show_primes(d: &Domain, ps: &[PrimeIdeal]) -> String {
    let v: Vec<String> = ps.iter().map(|p| p.show(d)).collect();
    format!("[{}]", v.join(", "))
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::Op(_) => "closure",
            Oracle::Na(_) => "Nagata trace",
            Oracle::Kr(_) => "Kronecker trace",
        })
    }
}

struct Parser<'t> {
    text: &'t str,
    pos: usize,
}

impl<'t> Parser<'t> {
    fn new(text: &'t str) -> Self {
        Parser { text, pos: 0 }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(ExprError::Parse {
            text: self.text.to_string(),
            pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'t str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{c}'"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.text.len() {
            return self.err(self.pos, "trailing input");
        }
        Ok(())
    }

    /// An identifier at the cursor, not consumed.
    fn peek_ident(&mut self) -> Option<&'t str> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(r.len());
        (len > 0 && r.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')).then(|| &r[..len])
    }

    /// The identifier at the cursor when it is immediately followed by `(`.
    fn peek_call(&mut self) -> Option<&'t str> {
        let id = self.peek_ident()?;
        self.rest()[id.len()..].trim_start().starts_with('(').then_some(id)
    }

    /// The identifier at the cursor when it forms a whole argument.
    fn peek_word(&mut self) -> Option<&'t str> {
        let id = self.peek_ident()?;
        let after = self.rest()[id.len()..].trim_start();
        (after.is_empty() || after.starts_with([',', ')', ']'])).then_some(id)
    }

    fn take(&mut self, s: &str) {
        self.skip_ws();
        debug_assert!(self.rest().starts_with(s));
        self.pos += s.len();
    }

    /// The raw text of one argument: up to a top-level `,`, `)` or `]`.
    fn raw_arg(&mut self) -> Result<(usize, &'t str)> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0i32;
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                ',' | ')' | ']' if depth == 0 => {
                    let raw = self.text[start..start + i].trim_end();
                    self.pos = start + i;
                    return if raw.is_empty() { self.err(start, "empty argument") } else { Ok((start, raw)) };
                }
                _ => {}
            }
        }
        let raw = self.rest().trim_end();
        self.pos = self.text.len();
        if raw.is_empty() {
            self.err(start, "empty argument")
        } else {
            Ok((start, raw))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let (at, raw) = self.raw_arg()?;
        raw.parse().or_else(|_| self.err(at, format!("expected an integer, found '{raw}'")))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let (at, raw) = self.raw_arg()?;
        BigRational::from_str(&raw.replace(' ', "")).or_else(|_| self.err(at, format!("expected a rational, found '{raw}'")))
    }

    /// `name=` at the cursor, consumed when present.
    fn keyword(&mut self, name: &str) -> bool {
        self.skip_ws();
        let r = self.rest();
        if let Some(after) = r.strip_prefix(name) {
            if after.trim_start().starts_with('=') {
                self.pos += name.len();
                self.skip_ws();
                self.pos += 1;
                return true;
            }
        }
        false
    }

    /// Comma-separated items up to `close`; the opener is already consumed.
    fn list<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}

/// Evaluates expressions over a domain and a set of named definitions.
pub struct Env<'a> {
    pub d: &'a Domain,
    pub defs: &'a Defs,
    resolving: RefCell<Vec<String>>,
}

impl<'a> Env<'a> {
    pub fn new(d: &'a Domain, defs: &'a Defs) -> Self {
        Env {
            d,
            defs,
            resolving: RefCell::new(Vec::new()),
        }
    }

    fn eval_err(text: &str, e: impl Into<SemistarError>) -> ExprError {
        ExprError::Eval {
            text: text.to_string(),
            source: e.into(),
        }
    }

    /// Parses the stored definition `name` with `f`, guarding against cycles.
    fn resolve<T>(&self, name: &str, text: &str, f: impl FnOnce(&Self, &mut Parser) -> Result<T>) -> Result<T> {
        if self.resolving.borrow().iter().any(|n| n == name) {
            return Err(ExprError::Cycle(name.to_string()));
        }
        self.resolving.borrow_mut().push(name.to_string());
        let mut p = Parser::new(text);
        let out = f(self, &mut p).and_then(|v| p.finish().map(|_| v));
        self.resolving.borrow_mut().pop();
        out
    }

    fn whole<T>(&self, text: &str, f: impl FnOnce(&Self, &mut Parser) -> Result<T>) -> Result<T> {
        let mut p = Parser::new(text);
        let v = f(self, &mut p)?;
        p.finish()?;
        Ok(v)
    }

    pub fn op(&self, text: &str) -> Result<SemistarOp> {
        self.whole(text, Self::p_op)
    }

    pub fn oracle(&self, text: &str) -> Result<Oracle> {
        self.whole(text, Self::p_oracle)
    }

    pub fn ideal(&self, text: &str) -> Result<FractionalIdeal> {
        self.whole(text, Self::p_ideal)
    }

    pub fn element(&self, text: &str) -> Result<KElem> {
        self.whole(text, Self::p_element)
    }

    pub fn function(&self, text: &str) -> Result<RationalFunctionElem> {
        RationalFunctionElem::parse(self.d, text).map_err(|e| match e {
            SemistarError::Domain(e) => self.domain_err(text, 0, e),
            other => Self::eval_err(text, other),
        })
    }

    pub fn prime(&self, text: &str) -> Result<PrimeIdeal> {
        self.whole(text, Self::p_prime)
    }

    pub fn primes(&self, text: &str) -> Result<Vec<PrimeIdeal>> {
        self.whole(text, Self::p_primes)
    }

    pub fn valuation(&self, text: &str) -> Result<ValuationSpec> {
        self.whole(text, Self::p_valuation)
    }

    /// Any expression, classified by its head.
    pub fn eval(&self, text: &str) -> Result<Value> {
        let mut p = Parser::new(text);
        let head = p.peek_call().or_else(|| p.peek_word());
        let v = match head {
            Some("ideal" | "frac" | "dual" | "sum" | "prod" | "pow" | "colon" | "close") => Value::Ideal(self.p_ideal(&mut p)?),
            Some("na" | "kr") => Value::Oracle(self.p_oracle(&mut p)?),
            Some(
                "d" | "v" | "t" | "b" | "ex53" | "w" | "fin" | "tilde" | "a" | "spectral" | "extend" | "restrict" | "valfam",
            ) => Value::Op(self.p_op(&mut p)?),
            Some("above") => Value::Primes(self.p_primes(&mut p)?),
            Some("prime" | "asserted") => Value::Primes(vec![self.p_prime(&mut p)?]),
            Some("dvr" | "weight" | "lex") => Value::Valuation(self.p_valuation(&mut p)?),
            Some(name) if self.defs.ops.contains_key(name) => Value::Op(self.p_op(&mut p)?),
            Some(name) if self.defs.ideals.contains_key(name) => Value::Ideal(self.p_ideal(&mut p)?),
            Some(name) if self.defs.primes.contains_key(name) => Value::Primes(vec![self.p_prime(&mut p)?]),
            Some(name) if self.defs.candidates.contains_key(name) => Value::Primes(self.p_primes(&mut p)?),
            Some(name) if self.defs.valuations.contains_key(name) => Value::Valuation(self.p_valuation(&mut p)?),
            _ if p.peek() == Some('[') => Value::Primes(self.p_primes(&mut p)?),
            _ if text.contains('$') => return Ok(Value::Function(self.function(text)?)),
            _ => Value::Element(self.p_element(&mut p)?),
        };
        p.finish()?;
        Ok(v)
    }

    fn domain_err(&self, text: &str, offset: usize, e: DomainError) -> ExprError {
        match e {
            DomainError::Parse { pos, msg } => ExprError::Parse {
                text: text.to_string(),
                pos: offset + pos,
                msg,
            },
            other => Self::eval_err(text, other),
        }
    }

    fn p_element(&self, p: &mut Parser) -> Result<KElem> {
        let (at, raw) = p.raw_arg()?;
        parse_element(self.d, raw).map_err(|e| match e {
            DomainError::Parse { pos, msg } => ExprError::Parse {
                text: p.text.to_string(),
                pos: at + pos,
                msg,
            },
            other => Self::eval_err(p.text, other),
        })
    }

    /// An element of `D`.
    fn p_integral(&self, p: &mut Parser) -> Result<semistar_core::exact::MultiPoly> {
        let at = p.pos;
        let z = self.p_element(p)?;
        self.d.k_to_d(&z).map_or_else(|| p.err(at, "expected an element of D"), Ok)
    }

    fn p_ideal(&self, p: &mut Parser) -> Result<FractionalIdeal> {
        let d = self.d;
        let at = p.pos;
        let text = p.text;
        let ev = move |r: std::result::Result<FractionalIdeal, DomainError>| r.map_err(|e| Self::eval_err(text, e));
        if let Some(name) = p.peek_word() {
            if let Some(def) = self.defs.ideals.get(name) {
                p.take(name);
                return self.resolve(name, def, Self::p_ideal);
            }
        }
        let Some(head) = p.peek_call() else {
            return p.err(at, "expected an ideal");
        };
        p.take(head);
        p.expect('(')?;
        let out = match head {
            "ideal" => {
                let elems = p.list(')', |p| self.p_element(p))?;
                return ev(FractionalIdeal::from_elements(d, &elems));
            }
            "frac" => {
                let i = self.p_ideal(p)?;
                p.expect(',')?;
                let z = self.p_element(p)?;
                let inv = d.k_inv(&z).map_err(|e| Self::eval_err(p.text, e))?;
                ev(i.scale(d, &inv))?
            }
            "dual" => self.p_ideal(p)?.dual(d),
            "sum" | "prod" | "colon" => {
                let a = self.p_ideal(p)?;
                p.expect(',')?;
                let b = self.p_ideal(p)?;
                match head {
                    "sum" => a.sum(d, &b),
                    "prod" => a.product(d, &b),
                    _ => a.colon(d, &b),
                }
            }
            "pow" => {
                let a = self.p_ideal(p)?;
                p.expect(',')?;
                let at = p.pos;
                let k = p.integer()?;
                let k = u32::try_from(k).or_else(|_| p.err(at, "exponent must be nonnegative"))?;
                a.power(d, k)
            }
            "close" => {
                let s = self.p_op(p)?;
                p.expect(',')?;
                let e = self.p_ideal(p)?;
                let c = s.apply(d, &e).map_err(|e| Self::eval_err(p.text, e))?;
                match c.presentation() {
                    Some(f) => f.clone(),
                    None => return p.err(at, "the closure has no finite presentation"),
                }
            }
            other => return p.err(at, format!("unknown ideal constructor '{other}'")),
        };
        p.expect(')')?;
        Ok(out.normalize(d))
    }

    fn p_prime(&self, p: &mut Parser) -> Result<PrimeIdeal> {
        let at = p.pos;
        if let Some(name) = p.peek_word() {
            if let Some(def) = self.defs.primes.get(name) {
                p.take(name);
                return self.resolve(name, def, Self::p_prime);
            }
        }
        let asserted = match p.peek_call() {
            Some(h @ ("prime" | "asserted")) => {
                p.take(h);
                h == "asserted"
            }
            _ => false,
        };
        let gens = if p.peek() == Some('(') && (asserted || self.is_tuple(p)) {
            p.expect('(')?;
            p.list(')', |p| self.p_integral(p))?
        } else {
            vec![self.p_integral(p)?]
        };
        let made = if asserted {
            PrimeIdeal::asserted(self.d, gens)
        } else {
            PrimeIdeal::new(self.d, gens)
        };
        made.map_err(|e| match e {
            DomainError::NotPrime(m) => ExprError::Parse {
                text: p.text.to_string(),
                pos: at,
                msg: format!("not a certified prime: {m}; use asserted(...) to take it on trust"),
            },
            other => Self::eval_err(p.text, other),
        })
    }

    /// Whether the parenthesis at the cursor encloses a generator tuple rather
    /// than being the start of an element such as `(X + Y)*X`.
    fn is_tuple(&self, p: &mut Parser) -> bool {
        let save = p.pos;
        let tuple = p.eat('(') && p.list(')', |p| p.raw_arg().map(|_| ())).is_ok() && {
            let after = p.rest().trim_start();
            after.is_empty() || after.starts_with([',', ')', ']'])
        };
        p.pos = save;
        tuple
    }

    fn p_primes(&self, p: &mut Parser) -> Result<Vec<PrimeIdeal>> {
        let at = p.pos;
        if p.eat('[') {
            return p.list(']', |p| self.p_prime(p));
        }
        if p.peek_call() == Some("above") {
            p.take("above");
            p.expect('(')?;
            let ns = p.list(')', |p| p.integer())?;
            return Ok(ns.into_iter().flat_map(|n| PrimeIdeal::above(self.d, &BigInt::from(n))).collect());
        }
        if let Some(name) = p.peek_word() {
            if let Some(list) = self.defs.candidates.get(name) {
                p.take(name);
                let joined = format!("[{}]", list.join(", "));
                return self.resolve(name, &joined, Self::p_primes);
            }
            return Err(ExprError::Unbound(name.to_string()));
        }
        p.err(at, "expected a prime list")
    }

    fn p_mset(&self, p: &mut Parser, base: &SemistarOp) -> Result<Vec<PrimeIdeal>> {
        if p.peek_call() == Some("max") {
            p.take("max");
            p.expect('(')?;
            let cands = self.p_primes(p)?;
            p.expect(')')?;
            let spec = quasi_star_spectrum(self.d, &base.finite(), &cands).map_err(|e| Self::eval_err(p.text, e))?;
            return Ok(spec.maximal);
        }
        self.p_primes(p)
    }

    fn p_valuation(&self, p: &mut Parser) -> Result<ValuationSpec> {
        let at = p.pos;
        if let Some(name) = p.peek_word() {
            if let Some(def) = self.defs.valuations.get(name) {
                p.take(name);
                return self.resolve(name, def, Self::p_valuation);
            }
            return Err(ExprError::Unbound(name.to_string()));
        }
        let v = match p.peek_call() {
            Some("dvr") => {
                p.take("dvr");
                p.expect('(')?;
                let f = self.p_integral(p)?;
                p.expect(')')?;
                ValuationSpec::DvrAlongPrime(f)
            }
            Some("weight") => {
                p.take("weight");
                p.expect('(')?;
                ValuationSpec::MonomialWeight(p.list(')', |p| p.rational())?)
            }
            Some("lex") => {
                p.take("lex");
                p.expect('(')?;
                p.expect('[')?;
                let r0 = p.list(']', |p| p.integer())?;
                p.expect(',')?;
                p.expect('[')?;
                let r1 = p.list(']', |p| p.integer())?;
                p.expect(')')?;
                ValuationSpec::LexMonomial([r0, r1])
            }
            _ => return p.err(at, "expected a valuation: dvr(f), weight(...) or lex([...], [...])"),
        };
        v.validate(self.d).map_err(|e| Self::eval_err(p.text, e))?;
        Ok(v)
    }

    fn p_overring(&self, p: &mut Parser) -> Result<Overring> {
        match p.peek_call().or_else(|| p.peek_word()) {
            Some("localize") => {
                p.take("localize");
                p.expect('(')?;
                let q = self.p_prime(p)?;
                p.expect(')')?;
                Ok(Overring::Localization(q))
            }
            Some("D") => {
                p.take("D");
                Ok(Overring::Base)
            }
            Some("K") => {
                p.take("K");
                Ok(Overring::Field)
            }
            _ => p.err(p.pos, "expected an overring: localize(P), D or K"),
        }
    }

    fn p_oracle(&self, p: &mut Parser) -> Result<Oracle> {
        match p.peek_call() {
            Some(h @ ("na" | "kr")) => {
                p.take(h);
                p.expect('(')?;
                let s = self.p_op(p)?;
                p.expect(')')?;
                Ok(if h == "na" { Oracle::Na(s) } else { Oracle::Kr(s) })
            }
            _ => Ok(Oracle::Op(self.p_op(p)?)),
        }
    }

    fn p_op(&self, p: &mut Parser) -> Result<SemistarOp> {
        let d = self.d;
        let at = p.pos;
        let text = p.text;
        let ev = move |r: std::result::Result<SemistarOp, SemistarError>| r.map_err(|e| Self::eval_err(text, e));
        if let Some(word) = p.peek_word() {
            p.take(word);
            return match word {
                "d" => Ok(SemistarOp::identity()),
                "v" => Ok(SemistarOp::v()),
                "t" => Ok(SemistarOp::t()),
                "b" => ev(SemistarOp::b(d)),
                "ex53" => ev(SemistarOp::ex53(d)),
                name => match self.defs.ops.get(name) {
                    Some(def) => self.resolve(name, def, Self::p_op),
                    None => Err(ExprError::Unbound(name.to_string())),
                },
            };
        }
        let Some(head) = p.peek_call() else {
            return p.err(at, "expected an operation");
        };
        p.take(head);
        p.expect('(')?;
        let out = match head {
            "w" => ev(self.p_op(p)?.w())?,
            "fin" => self.p_op(p)?.finite(),
            "tilde" => {
                let base = self.p_op(p)?;
                p.expect(',')?;
                let m = self.p_mset(p, &base)?;
                ev(base.tilde(d, m))?
            }
            "a" => {
                let base = self.p_op(p)?;
                let mut budget = Budget::new(2);
                while p.eat(',') {
                    p.skip_ws();
                    let kat = p.pos;
                    let positional = p.peek().is_some_and(|c| c.is_ascii_digit());
                    if positional || p.keyword("budget") {
                        let n = p.integer()?;
                        budget.depth = u32::try_from(n).or_else(|_| p.err(kat, "budget must be nonnegative"))?;
                    } else if p.keyword("aux") {
                        p.expect('[')?;
                        budget.aux = p.list(']', |p| self.p_ideal(p))?;
                    } else {
                        return p.err(kat, "expected budget=N or aux=[...]");
                    }
                }
                ev(base.a(budget))?
            }
            "spectral" => ev(SemistarOp::spectral(d, self.p_primes(p)?))?,
            "extend" => ev(SemistarOp::extension(d, self.p_overring(p)?))?,
            "restrict" => {
                let base = self.p_op(p)?;
                p.expect(',')?;
                ev(base.restrict(d, self.p_overring(p)?))?
            }
            "valfam" => {
                p.expect('[')?;
                let mut vals = p.list(']', |p| self.p_valuation(p))?;
                if p.eat(',') {
                    p.skip_ws();
                    let kat = p.pos;
                    if !p.keyword("primes") {
                        return p.err(kat, "expected primes=[...]");
                    }
                    for q in self.p_primes(p)? {
                        match q.gens.as_slice() {
                            [f] => vals.push(ValuationSpec::DvrAlongPrime(f.clone())),
                            _ => return p.err(kat, format!("{} is not principal", q.show(d))),
                        }
                    }
                }
                ev(SemistarOp::valuation_family(d, vals))?
            }
            other => return p.err(at, format!("unknown operation '{other}'")),
        };
        p.expect(')')?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semistar_core::domains::Center;

    fn local() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    #[test]
    fn ideals_and_fractions() {
        let d = local();
        let defs = Defs::default();
        let env = Env::new(&d, &defs);
        let e = env.ideal("ideal(X, Y)").unwrap();
        assert_eq!(e.show(&d), "(X, Y)");
        let f = env.ideal("frac(ideal(X^2, X*Y), X)").unwrap();
        assert!(f.same(&d, &e));
        let q = Domain::quadratic((-3).into()).unwrap();
        let env = Env::new(&q, &defs);
        let c = env.ideal("frac(ideal(2, 1+w), 1)").unwrap();
        assert!(c.same(&q, &env.ideal("ideal(2, 1 + w)").unwrap()));
        let inv = env.ideal("dual(ideal(2, 1+w))").unwrap();
        assert!(inv.same(&q, &env.ideal("ideal(1, (1+w)/2)").unwrap()));
    }

    #[test]
    fn operations_and_names() {
        let d = local();
        let mut defs = Defs::default();
        defs.primes.insert("N".into(), "(X, Y)".into());
        defs.candidates.insert("c".into(), vec!["X".into(), "(Y)".into(), "X - Y".into(), "N".into()]);
        defs.ops.insert("s".into(), "ex53".into());
        defs.ops.insert("loop".into(), "w(loop)".into());
        let env = Env::new(&d, &defs);
        let a = env.op("a(d, budget=2)").unwrap();
        let e = env.ideal("ideal(X^2, Y^2)").unwrap();
        assert!(a.member(&d, &e, &env.element("X*Y").unwrap()).unwrap());
        assert_eq!(env.op("a(d, 2)").unwrap().name(&d), a.name(&d));
        let tl = env.op("tilde(s, max(c))").unwrap();
        assert_eq!(tl.name(&d), "tilde(ex53, [(X, Y)])");
        assert_eq!(env.op("loop").unwrap_err(), ExprError::Cycle("loop".into()));
        assert_eq!(env.op("q").unwrap_err(), ExprError::Unbound("q".into()));
        let vf = env.op("valfam([lex([1, 0], [0, 1])], primes=[Y, X - Y])").unwrap();
        assert!(vf.name(&d).contains("dvr(X - Y)"));
        assert!(env.op("extend(localize(X))").is_ok());
        assert!(matches!(env.oracle("kr(d)").unwrap(), Oracle::Kr(_)));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let d = local();
        let defs = Defs::default();
        let env = Env::new(&d, &defs);
        match env.ideal("ideal(X, Z)") {
            Err(ExprError::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(env.op("a(d, depth=2)"), Err(ExprError::Parse { pos: 5, .. })));
        assert!(matches!(env.prime("X^2 + Y^2"), Err(ExprError::Parse { .. })));
        assert!(env.prime("asserted(X^2 + Y^2)").is_ok());
    }

    #[test]
    fn classification() {
        let d = local();
        let defs = Defs::default();
        let env = Env::new(&d, &defs);
        assert!(matches!(env.eval("ideal(X)").unwrap(), Value::Ideal(_)));
        assert!(matches!(env.eval("X/Y").unwrap(), Value::Element(_)));
        assert!(matches!(env.eval("X*Y/(X^2 + Y^2*$X)").unwrap(), Value::Function(_)));
        assert!(matches!(env.eval("w(v)").unwrap(), Value::Op(_)));
        assert!(matches!(env.eval("[X, (X, Y)]").unwrap(), Value::Primes(ps) if ps.len() == 2));
        assert!(matches!(env.eval("weight(1, 1/2)").unwrap(), Value::Valuation(_)));
    }
}
