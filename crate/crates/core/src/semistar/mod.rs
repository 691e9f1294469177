//! Semistar operations on fractional ideals.
//!
//! A [`SemistarOp`] maps a fractional ideal `E` to a [`Closure`]: either a
//! finite presentation, all of `K`, or a membership oracle. Inclusions between
//! closures reduce to generator membership, since `A^★ ⊆ B^★ ⇔ A ⊆ B^★`.

mod apply;
pub(crate) use apply::pool;
pub mod checks;
pub mod quasi;
pub mod sample;

use std::fmt;

use thiserror::Error;

use crate::domains::{Domain, DomainError, FractionalIdeal, KElem, LocalOracle, PrimeIdeal, ValuationSpec};

pub use checks::{
    check_axioms, check_eab, compare_ops, is_star_valuation_overring, AxiomReport, EabReport, OpOrder,
    OrderEvidence, OverringVerdict,
};
pub use quasi::{is_quasi_star_ideal, quasi_star_spectrum, QuasiVerdict, Spectrum};
pub use sample::Sampler;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemistarError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Unsupported(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("the trivial operation (E ↦ K) is not accepted here")]
    Trivial,
}

pub type Result<T> = std::result::Result<T, SemistarError>;

/// How much of the true closure a computed closure is known to capture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grade {
    Exact,
    /// Contained in the true closure; `no` answers are not conclusive.
    LowerBound,
}

/// The overring `T` of a restricted operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overring {
    /// `D` itself.
    Base,
    /// `D_P`.
    Localization(PrimeIdeal),
    /// The quotient field.
    Field,
}

/// Witness-pool parameters of the `★_a` search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximal number of factors in a pool product.
    pub depth: u32,
    /// Extra ideals offered as factors besides `F` and the maximal ideal.
    pub aux: Vec<FractionalIdeal>,
}

impl Budget {
    pub fn new(depth: u32) -> Budget {
        Budget { depth, aux: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// `d`: the identity.
    Identity,
    /// `v`: `E ↦ (E^{-1})^{-1}`.
    Divisorial,
    /// `t`: the finite-type part of `v`.
    T,
    /// `b`: intersection of extensions to all valuation overrings.
    B,
    /// The case-defined operation on a two-dimensional regular local ring:
    /// `fD ↦ fD`, and `J = fI ↦ fN` when `I` lies in no proper principal ideal.
    Ex53,
    /// `E ↦ ∩ {E·D_P | P ∈ Δ}`.
    Spectral(Vec<PrimeIdeal>),
    /// `E ↦ E·T`.
    Extension(Overring),
    /// `E ↦ ∩ {E·V | V ∈ W}` for an explicit finite family.
    ValuationFamily(Vec<ValuationSpec>),
    /// `★_f`.
    Finite(Box<SemistarOp>),
    /// The spectral operation at the quasi-`★_f`-maximal primes `mset`.
    Tilde { base: Box<SemistarOp>, mset: Vec<PrimeIdeal> },
    /// `★_w`: `E ↦ ∪ {(E : H) | H^★ = D^★}`.
    W(Box<SemistarOp>),
    /// `★_a`, computed as a lower bound over a witness pool.
    A { base: Box<SemistarOp>, budget: Budget },
    /// `★` restricted to the ideals of an overring `T`.
    Restricted { base: Box<SemistarOp>, overring: Overring },
    /// `E ↦ K`.
    Trivial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub finite_type: bool,
    pub stable_claimed: bool,
    pub eab_claimed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistarOp {
    pub kind: OpKind,
    pub flags: Flags,
}

/// A logged step of a derived closure, e.g. the `H` of a `★_a` contribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub h: Option<FractionalIdeal>,
    pub gained: Vec<KElem>,
}

#[derive(Clone, Debug)]
pub enum Closure {
    /// All of `K`.
    Whole,
    Presented(FractionalIdeal),
    Local(Box<LocalOracle>),
    /// Intersection of the listed closures.
    Intersection(Vec<Closure>),
    /// `∩ {E·V | V ∈ vals}`.
    Valuations { ideal: FractionalIdeal, vals: Vec<ValuationSpec> },
    /// `{ z | 1 ∈ ((E :_D z))^★ }`.
    ColonUnit { star: Box<SemistarOp>, ideal: FractionalIdeal },
    /// `(C : H) = { z | zH ⊆ C }`.
    Colon { inner: Box<Closure>, by: FractionalIdeal },
    /// A D-module containing each listed closure; membership in any part is
    /// membership in the whole.
    Union(Vec<Closure>),
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub closure: Closure,
    pub grade: Grade,
    pub witnesses: Vec<Witness>,
}

impl ClosureResult {
    fn exact(closure: Closure) -> ClosureResult {
        ClosureResult {
            closure,
            grade: Grade::Exact,
            witnesses: vec![],
        }
    }

    pub fn contains(&self, d: &Domain, z: &KElem) -> Result<bool> {
        self.closure.contains(d, z)
    }

    pub fn presentation(&self) -> Option<&FractionalIdeal> {
        match &self.closure {
            Closure::Presented(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.closure, Closure::Whole)
    }
}

impl Closure {
    pub fn contains(&self, d: &Domain, z: &KElem) -> Result<bool> {
        if z.num.is_zero() {
            return Ok(true);
        }
        Ok(match self {
            Closure::Whole => true,
            Closure::Presented(e) => e.contains(d, z),
            Closure::Local(o) => o.contains(d, z),
            Closure::Intersection(parts) => {
                for p in parts {
                    if !p.contains(d, z)? {
                        return Ok(false);
                    }
                }
                true
            }
            Closure::Valuations { ideal, vals } => vals.iter().all(|v| v.extension_contains(d, ideal, z)),
            Closure::ColonUnit { star, ideal } => {
                let j = colon_in_d(d, ideal, z);
                star.apply(d, &j)?.contains(d, &d.k_from_d(&d.one()))?
            }
            Closure::Colon { inner, by } => {
                for g in by.elements(d) {
                    if !inner.contains(d, &d.k_mul(z, &g))? {
                        return Ok(false);
                    }
                }
                true
            }
            Closure::Union(parts) => {
                for p in parts {
                    if p.contains(d, z)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// `E^★ ∩ D` when it has a finite presentation.
    pub fn contraction(&self, d: &Domain) -> Option<FractionalIdeal> {
        match self {
            Closure::Whole => Some(FractionalIdeal::unit(d)),
            Closure::Presented(e) => Some(e.contract(d)),
            Closure::Local(o) => o.contraction.clone(),
            Closure::Intersection(parts) => {
                let mut acc = FractionalIdeal::unit(d);
                for p in parts {
                    acc = acc.intersect(d, &p.contraction(d)?);
                }
                Some(acc)
            }
            Closure::Valuations { ideal, vals } => {
                let mut acc = FractionalIdeal::unit(d);
                for v in vals {
                    let gens = v.contraction(d, &v.min_value(d, ideal));
                    acc = acc.intersect(d, &FractionalIdeal::integral(d, gens).ok()?);
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

/// `(E :_D z) = { x ∈ D | xz ∈ E }` as an integral ideal.
pub(crate) fn colon_in_d(d: &Domain, e: &FractionalIdeal, z: &KElem) -> FractionalIdeal {
    // x·u/w ∈ (1/e)I  ⇔  x·(e·u) ∈ w·I
    let y = d.mul(&e.den, &z.num);
    let wi = d.ideal_scale(&e.gens, &z.den);
    let gens = d.ideal_colon_elem(&wi, &y);
    FractionalIdeal::integral(d, gens).expect("nonzero colon")
}

impl SemistarOp {
    fn with(kind: OpKind, finite_type: bool, stable: bool, eab: bool) -> SemistarOp {
        SemistarOp {
            kind,
            flags: Flags {
                finite_type,
                stable_claimed: stable,
                eab_claimed: eab,
            },
        }
    }

    pub fn identity() -> SemistarOp {
        Self::with(OpKind::Identity, true, true, false)
    }

    pub fn v() -> SemistarOp {
        Self::with(OpKind::Divisorial, false, false, false)
    }

    pub fn t() -> SemistarOp {
        Self::with(OpKind::T, true, false, false)
    }

    /// `b`; closures are computed for monomial and principal numerators.
    pub fn b(d: &Domain) -> Result<SemistarOp> {
        if !d.has_gcd() {
            return Err(SemistarError::Unsupported(format!("b on {}", d.describe())));
        }
        Ok(Self::with(OpKind::B, true, false, true))
    }

    pub fn ex53(d: &Domain) -> Result<SemistarOp> {
        if !d.is_local_at_origin() {
            return Err(SemistarError::Unsupported(format!(
                "the case-defined operation needs a polynomial ring localized at the origin, not {}",
                d.describe()
            )));
        }
        Ok(Self::with(OpKind::Ex53, true, false, false))
    }

    pub fn spectral(d: &Domain, primes: Vec<PrimeIdeal>) -> Result<SemistarOp> {
        if primes.is_empty() {
            return Err(SemistarError::Empty("prime set"));
        }
        if let Some(p) = primes.iter().find(|p| !p.is_proper()) {
            return Err(DomainError::NotPrime(format!("{} extends to D", p.show(d))).into());
        }
        Ok(Self::with(OpKind::Spectral(primes), true, true, false))
    }

    /// `E ↦ E·T`.
    pub fn extension(d: &Domain, t: Overring) -> Result<SemistarOp> {
        if let Overring::Localization(p) = &t {
            if !p.is_proper() {
                return Err(DomainError::NotPrime(format!("{} extends to D", p.show(d))).into());
            }
        }
        Ok(Self::with(OpKind::Extension(t), true, true, false))
    }

    pub fn valuation_family(d: &Domain, vals: Vec<ValuationSpec>) -> Result<SemistarOp> {
        if vals.is_empty() {
            return Err(SemistarError::Empty("valuation family"));
        }
        for v in &vals {
            v.validate(d)?;
        }
        Ok(Self::with(OpKind::ValuationFamily(vals), true, false, true))
    }

    pub fn trivial() -> SemistarOp {
        Self::with(OpKind::Trivial, true, true, true)
    }

    /// `★_f`; `(v)_f` is `t`.
    pub fn finite(&self) -> SemistarOp {
        match &self.kind {
            OpKind::Divisorial => Self::t(),
            _ if self.flags.finite_type => self.clone(),
            _ => SemistarOp {
                kind: OpKind::Finite(Box::new(self.clone())),
                flags: Flags {
                    finite_type: true,
                    ..self.flags
                },
            },
        }
    }

    /// The spectral operation at `mset`, the quasi-`★_f`-maximal primes.
    pub fn tilde(&self, d: &Domain, mset: Vec<PrimeIdeal>) -> Result<SemistarOp> {
        self.reject_trivial()?;
        if mset.is_empty() {
            return Err(SemistarError::Empty("quasi-maximal set"));
        }
        Self::spectral(d, mset.clone())?;
        Ok(Self::with(
            OpKind::Tilde {
                base: Box::new(self.clone()),
                mset,
            },
            true,
            true,
            false,
        ))
    }

    pub fn w(&self) -> Result<SemistarOp> {
        self.reject_trivial()?;
        Ok(Self::with(OpKind::W(Box::new(self.clone())), true, true, false))
    }

    pub fn a(&self, budget: Budget) -> Result<SemistarOp> {
        self.reject_trivial()?;
        if budget.depth == 0 {
            return Err(SemistarError::Empty("witness budget"));
        }
        Ok(Self::with(
            OpKind::A {
                base: Box::new(self.clone()),
                budget,
            },
            true,
            false,
            true,
        ))
    }

    /// The operation induced on the ideals of the overring `t`.
    pub fn restrict(&self, d: &Domain, t: Overring) -> Result<SemistarOp> {
        if let Overring::Localization(p) = &t {
            if !p.is_proper() {
                return Err(DomainError::NotPrime(format!("{} extends to D", p.show(d))).into());
            }
        }
        Ok(SemistarOp {
            kind: OpKind::Restricted {
                base: Box::new(self.clone()),
                overring: t,
            },
            flags: self.flags,
        })
    }

    fn reject_trivial(&self) -> Result<()> {
        match self.kind {
            OpKind::Trivial => Err(SemistarError::Trivial),
            _ => Ok(()),
        }
    }

    /// Whether `D^★ = D` is known from the construction.
    pub fn is_star_on_d(&self, d: &Domain) -> bool {
        match &self.kind {
            OpKind::Identity | OpKind::Divisorial | OpKind::T | OpKind::B | OpKind::Ex53 => true,
            OpKind::Finite(b) | OpKind::W(b) | OpKind::Tilde { base: b, .. } | OpKind::A { base: b, .. } => {
                b.is_star_on_d(d)
            }
            OpKind::Spectral(ps) => PrimeIdeal::center(d).is_some_and(|m| ps.iter().any(|p| m.is_subset(d, p))),
            OpKind::Extension(Overring::Base) => true,
            OpKind::Extension(Overring::Localization(p)) => {
                PrimeIdeal::center(d).is_some_and(|m| m.is_subset(d, p))
            }
            _ => false,
        }
    }

    pub fn grade(&self) -> Grade {
        match &self.kind {
            OpKind::A { .. } => Grade::LowerBound,
            OpKind::Finite(b) | OpKind::Restricted { base: b, .. } => b.grade(),
            _ => Grade::Exact,
        }
    }

    pub fn apply(&self, d: &Domain, e: &FractionalIdeal) -> Result<ClosureResult> {
        apply::apply(self, d, e)
    }

    /// `z ∈ E^★`.
    pub fn member(&self, d: &Domain, e: &FractionalIdeal, z: &KElem) -> Result<bool> {
        self.apply(d, e)?.contains(d, z)
    }

    /// `A^★ ⊆ B^★`, decided as `A ⊆ B^★`.
    pub fn closure_subset(&self, d: &Domain, a: &FractionalIdeal, b: &FractionalIdeal) -> Result<bool> {
        let cb = self.apply(d, b)?;
        for g in a.elements(d) {
            if !cb.contains(d, &g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn closure_eq(&self, d: &Domain, a: &FractionalIdeal, b: &FractionalIdeal) -> Result<bool> {
        Ok(self.closure_subset(d, a, b)? && self.closure_subset(d, b, a)?)
    }

    /// `1 ∈ J^★`, i.e. `J^★ ⊇ D`; for integral `J` this is `J^★ = D^★`.
    pub fn is_trivializing(&self, d: &Domain, j: &FractionalIdeal) -> Result<bool> {
        self.member(d, j, &d.k_from_d(&d.one()))
    }

    pub fn name(&self, d: &Domain) -> String {
        let primes = |ps: &[PrimeIdeal]| ps.iter().map(|p| p.show(d)).collect::<Vec<_>>().join(", ");
        match &self.kind {
            OpKind::Identity => "d".into(),
            OpKind::Divisorial => "v".into(),
            OpKind::T => "t".into(),
            OpKind::B => "b".into(),
            OpKind::Ex53 => "ex53".into(),
            OpKind::Spectral(ps) => format!("spectral([{}])", primes(ps)),
            OpKind::Extension(t) => format!("extend({})", overring_name(d, t)),
            OpKind::ValuationFamily(vals) => format!(
                "valfam([{}])",
                vals.iter().map(|v| v.show(d)).collect::<Vec<_>>().join(", ")
            ),
            OpKind::Finite(b) => format!("fin({})", b.name(d)),
            OpKind::Tilde { base, mset } => format!("tilde({}, [{}])", base.name(d), primes(mset)),
            OpKind::W(b) => format!("w({})", b.name(d)),
            OpKind::A { base, budget } => format!("a({}, budget={})", base.name(d), budget.depth),
            OpKind::Restricted { base, overring } => format!("restrict({}, {})", base.name(d), overring_name(d, overring)),
            OpKind::Trivial => "trivial".into(),
        }
    }
}

fn overring_name(d: &Domain, t: &Overring) -> String {
    match t {
        Overring::Base => "D".into(),
        Overring::Localization(p) => format!("localize{}", p.show(d)),
        Overring::Field => "K".into(),
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grade::Exact => "exact",
            Grade::LowerBound => "lower-bound",
        })
    }
}
