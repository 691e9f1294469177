//! The Nagata ring `Na(D,★) = D[X†]_{N(★)}` and the Kronecker function ring
//! `Kr(D,★)`, handled through membership procedures and their traces on `K`.
//!
//! Polynomials over `D[X†]` are [`MultiPoly`] values with one more variable
//! than the backend, placed last. The global ring `D[X†]` is never localized:
//! colons commute with localization, so every colon is computed in the
//! polynomial ring over `Q` (polynomial backends) or `Z` (arithmetic backends,
//! with `w² - d` adjoined for quadratic orders) and read off by contents.

mod kr;
mod na;

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;

use crate::domains::{expr, Domain, DomainError, DomainKind, FractionalIdeal, KElem, ValuationSpec, Value};
use crate::exact::{MultiPoly, PolyIdeal, ZIdeal};
use crate::semistar::{Result, Sampler, SemistarError};

pub use kr::{default_valuations, extend_contract_kr, kr_bezout_combine, kr_member, recheck_kr, BezoutEvidence, KrContraction, KrOptions};
pub use na::{
    extend_contract_na, in_multiplicative_set_n, na_equal_iff_m, na_maximal_trace, na_member, recheck_na, MaximalTrace,
    NaComparison, NaContraction, Separator, TraceCheck,
};

/// Display name of the function-ring variable; `$X` is accepted on input.
pub const FVAR: &str = "X†";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertWitness {
    /// `h ∈ N(★)` with `h·f ∈ g·D[X†]`.
    NElement(MultiPoly),
    /// An integral ideal with `1 ∉ c^★`, the content of the relevant colon.
    ContentIdeal(FractionalIdeal),
    /// `h` with `(c(f)c(h))^★ ⊆ (c(g)c(h))^★`.
    Multiplier(MultiPoly),
    /// A generator of `c(f)` outside `c(g)^★`.
    Escapes(KElem),
    /// A ★-valuation overring `V` with `v(f) < v(g)`; `Kr(D,★) ⊆ V(X†)`.
    Obstruction { val: ValuationSpec, vf: Value, vg: Value },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub verdict: Verdict,
    pub witness: Option<CertWitness>,
    pub route: &'static str,
}

impl MembershipCertificate {
    fn new(verdict: Verdict, witness: Option<CertWitness>, route: &'static str) -> Self {
        MembershipCertificate { verdict, witness, route }
    }

    pub fn describe(&self, d: &Domain) -> String {
        let w = match &self.witness {
            None => String::new(),
            Some(CertWitness::NElement(h)) => format!(", h = {} ∈ N", show_fpoly(d, h)),
            Some(CertWitness::ContentIdeal(c)) => format!(", content {} is not ★-trivial", c.show(d)),
            Some(CertWitness::Multiplier(h)) => format!(", h = {}", show_fpoly(d, h)),
            Some(CertWitness::Escapes(z)) => format!(", {} ∉ c(g)^★", d.show_k(z)),
            Some(CertWitness::Obstruction { val, vf, vg }) => {
                format!(", {}: v(f) = {vf} < v(g) = {vg}", val.show(d))
            }
        };
        format!("{} ({}{w})", self.verdict, self.route)
    }
}

/// Variable names of `D[X†]`.
pub fn fnames(d: &Domain) -> Vec<String> {
    let mut names = d.var_names().to_vec();
    names.push(FVAR.to_string());
    names
}

/// The function-ring variable as an element of `D[X†]`.
pub fn fvar(d: &Domain) -> MultiPoly {
    MultiPoly::var(d.nvars() + 1, d.nvars())
}

pub fn show_fpoly(d: &Domain, p: &MultiPoly) -> String {
    p.display_with(&fnames(d)).to_string()
}

/// An element of `D` viewed in `D[X†]`.
pub fn lift(p: &MultiPoly) -> MultiPoly {
    p.append_vars(1)
}

/// `c(f)` as an integral ideal of `D`.
pub fn content(d: &Domain, f: &MultiPoly) -> Result<FractionalIdeal> {
    if f.is_zero() {
        return Err(SemistarError::Domain(DomainError::Zero));
    }
    let coeffs = d.reduce(f).coefficients_in(d.nvars());
    Ok(FractionalIdeal::integral(d, coeffs)?)
}

/// `Σ X†^{N_i} p_i` with each offset beyond the degrees already used, so that
/// the content is `Σ c(p_i)`.
pub fn spread(d: &Domain, parts: &[MultiPoly]) -> MultiPoly {
    let t = d.nvars();
    let mut out = MultiPoly::zero(t + 1);
    let mut offset = 0u32;
    for p in parts.iter().filter(|p| !p.is_zero()) {
        out = &out + &(p * &fvar(d).pow(offset));
        offset += p.degree_in(t) + 1;
    }
    d.reduce(&out)
}

/// `Σ X†^i g_i` for generators `g_i ∈ D`: a polynomial with content `(g_i)`.
pub fn with_content(d: &Domain, gens: &[MultiPoly]) -> MultiPoly {
    spread(d, &gens.iter().map(lift).collect::<Vec<_>>())
}

/// `f / g` in `K(X†)` with `f, g ∈ D[X†]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionElem {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunctionElem {
    /// Clears coefficient denominators on the arithmetic backends.
    pub fn new(d: &Domain, num: MultiPoly, den: MultiPoly) -> Result<Self> {
        let arity = d.nvars() + 1;
        if num.nvars() != arity || den.nvars() != arity {
            return Err(SemistarError::Unsupported(format!("expected polynomials in {arity} variables")));
        }
        if den.is_zero() {
            return Err(DomainError::Zero.into());
        }
        let (mut num, mut den) = (d.reduce(&num), d.reduce(&den));
        if !d.is_poly() {
            let l = expr::coeff_denominator(&num).lcm(&expr::coeff_denominator(&den));
            let lq = BigRational::from_integer(l);
            num = num.scale(&lq);
            den = den.scale(&lq);
        }
        Ok(RationalFunctionElem { num, den })
    }

    /// Parses a rational expression over the backend variables and `X†`
    /// (written `X†` or `$X`).
    pub fn parse(d: &Domain, text: &str) -> Result<Self> {
        let text = text.replace("$X", FVAR);
        let (num, den) = expr::parse_fraction(&text, &fnames(d))?;
        Self::new(d, num, den)
    }

    /// The constant `z ∈ K`.
    pub fn constant(z: &KElem) -> Self {
        RationalFunctionElem {
            num: lift(&z.num),
            den: lift(&z.den),
        }
    }

    pub fn show(&self, d: &Domain) -> String {
        let wrap = |p: &MultiPoly| {
            let s = show_fpoly(d, p);
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            show_fpoly(d, &self.num)
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }

    /// Equality in `K(X†)`.
    pub fn same(&self, d: &Domain, other: &Self) -> bool {
        d.reduce(&(&self.num * &other.den)) == d.reduce(&(&other.num * &self.den))
    }
}

/// Ideal arithmetic in `D[X†]` through the global polynomial ring.
pub(crate) fn colon(d: &Domain, gens: &[MultiPoly], f: &MultiPoly) -> Vec<MultiPoly> {
    match d.kind() {
        DomainKind::PolyLocal { .. } => {
            let i = PolyIdeal::new(gens.to_vec()).expect("nonzero ideal");
            i.colon_elem(f).generators().to_vec()
        }
        _ => {
            let i = ZIdeal::new(with_relation(d, gens)).expect("integral generators");
            let j = i.colon_elem(f);
            j.generators().iter().map(|g| d.reduce(g)).filter(|g| !g.is_zero()).collect()
        }
    }
}

pub(crate) fn ambient_contains(d: &Domain, gens: &[MultiPoly], p: &MultiPoly) -> bool {
    match d.kind() {
        DomainKind::PolyLocal { .. } => PolyIdeal::new(gens.to_vec()).expect("nonzero ideal").contains(p),
        _ => ZIdeal::new(with_relation(d, gens)).expect("integral generators").contains(p),
    }
}

fn with_relation(d: &Domain, gens: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out = gens.to_vec();
    if let DomainKind::Quadratic { d: disc } = d.kind() {
        let w = fvar_free_var(d, 0);
        let c = MultiPoly::constant(d.nvars() + 1, BigRational::from_integer(disc.clone()));
        out.push(&w.pow(2) - &c);
    }
    out
}

fn fvar_free_var(d: &Domain, i: usize) -> MultiPoly {
    MultiPoly::var(d.nvars() + 1, i)
}

/// A random element of `D[X†]` of degree at most `deg` in `X†`.
pub fn sample_fpoly(s: &mut Sampler, deg: u32) -> MultiPoly {
    let k = s.rng().gen_range(0..=deg);
    let parts: Vec<MultiPoly> = (0..=k).map(|_| s.element_d()).collect();
    let d = s.domain();
    let mut out = MultiPoly::zero(d.nvars() + 1);
    for (i, p) in parts.iter().enumerate() {
        out = &out + &(&lift(p) * &fvar(d).pow(i as u32));
    }
    d.reduce(&out)
}

/// A random element of `K(X†)`. A third of the denominators have a unit
/// coefficient and a third are multiples of the numerator's cofactor, so that
/// memberships are not almost always negative.
pub fn sample_rational_function(s: &mut Sampler) -> RationalFunctionElem {
    let d = s.domain();
    let roll = s.rng().gen_range(0..3);
    let mut num = sample_fpoly(s, 2);
    let den = match roll {
        0 => {
            let g = sample_fpoly(s, 1);
            d.reduce(&(&MultiPoly::one(d.nvars() + 1) + &(&g * &fvar(d))))
        }
        1 => {
            let g = sample_fpoly(s, 1);
            num = d.reduce(&(&num * &g));
            let h = sample_fpoly(s, 1);
            d.reduce(&(&g * &h))
        }
        _ => sample_fpoly(s, 2),
    };
    RationalFunctionElem::new(d, num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Center;

    #[test]
    fn parses_and_shows() {
        let d = Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap();
        let e = RationalFunctionElem::parse(&d, "X*Y/(X^2 + Y^2*$X)").unwrap();
        assert_eq!(e.den.degree_in(2), 1);
        assert!(e.show(&d).contains("X†"));
        let again = RationalFunctionElem::parse(&d, &e.show(&d).replace('*', " * ")).unwrap();
        assert!(again.same(&d, &e));
        let c = content(&d, &e.den).unwrap();
        assert!(c.same(&d, &FractionalIdeal::integral(&d, vec![d.var(0).pow(2), d.var(1).pow(2)]).unwrap()));
    }

    #[test]
    fn spread_adds_contents() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let a = lift(&d.int(2));
        let b = &lift(&(&d.one() + &d.var(0))) * &fvar(&d);
        let h = spread(&d, &[a, b.clone(), b]);
        let c = content(&d, &h).unwrap();
        assert!(c.same(&d, &FractionalIdeal::integral(&d, vec![d.int(2), &d.one() + &d.var(0)]).unwrap()));
        assert_eq!(h.degree_in(1), 4);
        let e = RationalFunctionElem::parse(&d, "(1+w)/2 + w*$X/3").unwrap();
        assert!(e.num.terms().all(|(_, c)| c.is_integer()));
        assert!(!e.den.is_one());
    }
}
