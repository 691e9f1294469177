//! Computable integral domains: `Z` and its localizations `Z_(p)`, quadratic
//! orders `Z[√d]`, and localizations of `Q[x_1, ..., x_n]`.
//!
//! Elements of `D` are carried as [`MultiPoly`] values over the backend's own
//! variables: none for the integers, the single generator `w = √d` for a
//! quadratic order (always reduced to degree at most one), and the polynomial
//! variables for the polynomial backend. An element of a localized backend is
//! represented by a polynomial numerator; units of the local ring are absorbed.
//! Elements of the quotient field are [`KElem`] fractions of such values.

pub mod expr;
pub mod fractional;
pub mod lattice;
pub mod localize;
pub mod primes;
pub mod valuation;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ideal::prune_generators;
use crate::exact::{poly_gcd, ExactError, Monomial, MonomialOrder, MultiPoly, PolyIdeal};
use lattice::{Lattice, Vec2};

pub use expr::{parse_element, parse_poly};
pub use fractional::FractionalIdeal;
pub use localize::{localize_contract, LocalOracle};
pub use primes::{PrimeCert, PrimeIdeal};
pub use valuation::{ValuationSpec, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("d = {0} is a perfect square")]
    SquareDiscriminant(BigInt),
    #[error("localization center is not prime: {0}")]
    NotPrime(String),
    #[error("zero ideal or zero element where a nonzero one is required")]
    Zero,
    #[error("element is not in D: {0}")]
    NotIntegral(String),
    #[error("ideal is not contained in D")]
    NotContained,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported on this backend: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Localization center of the polynomial backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Center {
    /// The polynomial ring itself.
    Global,
    /// The maximal ideal `(x_1, ..., x_n)`.
    Origin,
    /// A prime of `Q[x]` given by generators.
    Prime(PolyIdeal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Integers { local: Option<BigInt> },
    Quadratic { d: BigInt },
    PolyLocal { vars: Vec<String>, center: Center },
}

/// Serializable description of a backend, as it appears in scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Integers {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        localize_at: Option<i64>,
    },
    Quadratic {
        d: i64,
    },
    Poly {
        vars: Vec<String>,
        #[serde(default)]
        center: CenterSpec,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSpec {
    Global,
    #[default]
    Origin,
    /// Generators of a prime of the polynomial ring, as expressions.
    Prime(Vec<String>),
}

/// A concrete computable domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    kind: DomainKind,
    names: Vec<String>,
}

/// Element `num / den` of the quotient field, both parts in `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

pub(crate) fn int_of(p: &MultiPoly) -> BigInt {
    let c = p.constant_term();
    debug_assert!(c.is_integer());
    c.to_integer()
}

pub(crate) fn small_primes_of(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime_int(n: &BigInt) -> bool {
    n > &BigInt::one() && small_primes_of(n) == vec![n.clone()]
}

/// `p`-adic order of a nonzero integer.
pub(crate) fn vp(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

fn is_square(d: &BigInt) -> bool {
    if d.is_negative() {
        return false;
    }
    let r = d.sqrt();
    &r * &r == *d
}

impl Domain {
    pub fn integers(local: Option<BigInt>) -> Result<Domain, DomainError> {
        if let Some(p) = &local {
            if !is_prime_int(p) {
                return Err(DomainError::NotPrime(p.to_string()));
            }
        }
        Ok(Domain {
            kind: DomainKind::Integers { local },
            names: vec![],
        })
    }

    pub fn quadratic(d: BigInt) -> Result<Domain, DomainError> {
        if is_square(&d) || d.is_zero() {
            return Err(DomainError::SquareDiscriminant(d));
        }
        Ok(Domain {
            kind: DomainKind::Quadratic { d },
            names: vec!["w".to_string()],
        })
    }

    pub fn poly(vars: Vec<String>, center: Center) -> Result<Domain, DomainError> {
        if let Center::Prime(p) = &center {
            if p.nvars() != vars.len() {
                return Err(ExactError::ArityMismatch {
                    expected: vars.len(),
                    found: p.nvars(),
                }
                .into());
            }
            if primes::certify_poly_prime(p).is_none() {
                return Err(DomainError::NotPrime(p.display_with(&vars).to_string()));
            }
        }
        Ok(Domain {
            names: vars.clone(),
            kind: DomainKind::PolyLocal { vars, center },
        })
    }

    /// Builds a domain from its serializable description.
    pub fn from_spec(spec: &DomainSpec) -> Result<Domain, DomainError> {
        match spec {
            DomainSpec::Integers { localize_at } => Domain::integers(localize_at.map(BigInt::from)),
            DomainSpec::Quadratic { d } => Domain::quadratic(BigInt::from(*d)),
            DomainSpec::Poly { vars, center } => {
                let center = match center {
                    CenterSpec::Global => Center::Global,
                    CenterSpec::Origin => Center::Origin,
                    CenterSpec::Prime(gens) => {
                        let polys = gens
                            .iter()
                            .map(|g| parse_poly(g, vars))
                            .collect::<Result<Vec<_>, _>>()?;
                        Center::Prime(PolyIdeal::new(polys)?)
                    }
                };
                Domain::poly(vars.clone(), center)
            }
        }
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Number of variables used by element representatives.
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn is_poly(&self) -> bool {
        matches!(self.kind, DomainKind::PolyLocal { .. })
    }

    pub fn is_local_at_origin(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::PolyLocal {
                center: Center::Origin,
                ..
            }
        )
    }

    /// Whether `D` is a UFD with computable gcds.
    pub fn has_gcd(&self) -> bool {
        !matches!(self.kind, DomainKind::Quadratic { .. })
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            DomainKind::Integers { local: None } => "Z".into(),
            DomainKind::Integers { local: Some(p) } => format!("Z_({p})"),
            DomainKind::Quadratic { d } => format!("Z[√{d}]"),
            DomainKind::PolyLocal { vars, center } => {
                let base = format!("Q[{}]", vars.join(","));
                match center {
                    Center::Global => base,
                    Center::Origin => format!("{base}_({})", vars.join(",")),
                    Center::Prime(p) => format!("{base}_{}", p.display_with(vars)),
                }
            }
        }
    }

    // ---- elements of D ----------------------------------------------------

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(self.nvars())
    }

    pub fn one(&self) -> MultiPoly {
        MultiPoly::one(self.nvars())
    }

    pub fn int(&self, n: i64) -> MultiPoly {
        MultiPoly::from_int(self.nvars(), n)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.nvars(), i)
    }

    /// Quadratic reduction `w² = d` applied to the variable `var` of `p`.
    fn reduce_w(d: &BigInt, p: &MultiPoly, var: usize) -> MultiPoly {
        let dq = BigRational::from_integer(d.clone());
        MultiPoly::from_terms(
            p.nvars(),
            p.terms().map(|(m, c)| {
                let k = m.0[var];
                let mut e = m.0.clone();
                e[var] = k % 2;
                let mut coeff = c.clone();
                for _ in 0..k / 2 {
                    coeff *= &dq;
                }
                (Monomial(e), coeff)
            }),
        )
    }

    /// Canonical representative: reduces `w² = d` on the quadratic backend.
    /// Polynomials over `D[X†]` (one extra trailing variable) are accepted.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        match &self.kind {
            DomainKind::Quadratic { d } => Self::reduce_w(d, p, 0),
            _ => p.clone(),
        }
    }

    /// Checks that `p` represents an element of `D` (integer coefficients on
    /// the arithmetic backends).
    pub fn check_integral(&self, p: &MultiPoly) -> Result<MultiPoly, DomainError> {
        let p = self.reduce(p);
        match &self.kind {
            DomainKind::PolyLocal { .. } => Ok(p),
            _ => {
                if p.terms().all(|(_, c)| c.is_integer()) {
                    Ok(p)
                } else {
                    Err(DomainError::NotIntegral(self.show(&p)))
                }
            }
        }
    }

    pub fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, a: &MultiPoly, k: u32) -> MultiPoly {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    fn quad_vec(p: &MultiPoly) -> Vec2 {
        let x = p.coeff(&Monomial(vec![0])).to_integer();
        let y = p.coeff(&Monomial(vec![1])).to_integer();
        (x, y)
    }

    fn quad_elem(v: &Vec2) -> MultiPoly {
        MultiPoly::from_terms(
            1,
            [
                (Monomial(vec![0]), BigRational::from_integer(v.0.clone())),
                (Monomial(vec![1]), BigRational::from_integer(v.1.clone())),
            ],
        )
    }

    /// Conjugate `x - y·w` on the quadratic backend; identity elsewhere.
    pub fn conj(&self, p: &MultiPoly) -> MultiPoly {
        match &self.kind {
            DomainKind::Quadratic { .. } => {
                let (x, y) = Self::quad_vec(p);
                Self::quad_elem(&(x, -y))
            }
            _ => p.clone(),
        }
    }

    /// Norm `x² - d·y²` on the quadratic backend.
    pub fn norm(&self, p: &MultiPoly) -> Option<BigInt> {
        match &self.kind {
            DomainKind::Quadratic { d } => {
                let (x, y) = Self::quad_vec(p);
                Some(&x * &x - d * &y * &y)
            }
            _ => None,
        }
    }

    pub fn is_unit(&self, a: &MultiPoly) -> bool {
        if a.is_zero() {
            return false;
        }
        match &self.kind {
            DomainKind::Integers { local } => {
                let n = int_of(a);
                match local {
                    None => n.abs().is_one(),
                    Some(p) => !n.is_multiple_of(p),
                }
            }
            DomainKind::Quadratic { .. } => self.norm(a).unwrap().abs().is_one(),
            DomainKind::PolyLocal { center, .. } => match center {
                Center::Global => a.is_constant(),
                Center::Origin => !a.constant_term().is_zero(),
                Center::Prime(p) => !p.contains(a),
            },
        }
    }

    /// `a / b` when it lies in `D`.
    pub fn div_in_d(&self, a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        assert!(!b.is_zero(), "division by zero");
        if a.is_zero() {
            return Some(self.zero());
        }
        match &self.kind {
            DomainKind::Integers { local } => {
                let (x, y) = (int_of(a), int_of(b));
                match local {
                    None => x.is_multiple_of(&y).then(|| self.int_big(&(x / y))),
                    // a / b is p^(v_p(a) - v_p(b)) times a unit
                    Some(p) => {
                        let (ka, kb) = (vp(&x, p), vp(&y, p));
                        (ka >= kb).then(|| self.int_big(&p.pow(ka - kb)))
                    }
                }
            }
            DomainKind::Quadratic { .. } => {
                let n = self.norm(b).unwrap();
                let t = self.mul(a, &self.conj(b));
                let (x, y) = Self::quad_vec(&t);
                (x.is_multiple_of(&n) && y.is_multiple_of(&n)).then(|| Self::quad_elem(&(x / &n, y / &n)))
            }
            DomainKind::PolyLocal { .. } => {
                if let Some(q) = a.div_exact(b) {
                    return Some(q);
                }
                let g = poly_gcd(a, b);
                let a1 = a.div_exact(&g).unwrap();
                let b1 = b.div_exact(&g).unwrap();
                // a1 / b1 in lowest terms lies in D iff b1 is a unit; a1 is then a
                // representative up to that unit
                self.is_unit(&b1).then_some(a1)
            }
        }
    }

    pub(crate) fn int_big(&self, n: &BigInt) -> MultiPoly {
        MultiPoly::constant(self.nvars(), BigRational::from_integer(n.clone()))
    }

    /// Display of an element of `D`.
    pub fn show(&self, p: &MultiPoly) -> String {
        p.display_with(&self.names).to_string()
    }

    // ---- integral ideals --------------------------------------------------

    fn ints(gens: &[MultiPoly]) -> Vec<BigInt> {
        gens.iter().map(int_of).collect()
    }

    fn int_gcd(gens: &[MultiPoly]) -> BigInt {
        Self::ints(gens).iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Generator of a principal ideal of the integer backends, normalized to
    /// `p^k` on `Z_(p)`.
    fn int_generator(&self, gens: &[MultiPoly]) -> BigInt {
        let g = Self::int_gcd(gens);
        match &self.kind {
            DomainKind::Integers { local: Some(p) } if !g.is_zero() => p.pow(vp(&g, p)),
            _ => g,
        }
    }

    pub(crate) fn lattice_of(&self, gens: &[MultiPoly]) -> Option<Lattice> {
        let DomainKind::Quadratic { d } = &self.kind else {
            panic!("lattice of a non-quadratic backend")
        };
        let mut rows = Vec::new();
        for g in gens {
            let (x, y) = Self::quad_vec(g);
            rows.push((y.clone() * d, x.clone()));
            rows.push((x, y));
        }
        Lattice::from_rows(&rows)
    }

    fn lattice_gens(l: &Lattice) -> Vec<MultiPoly> {
        l.basis().iter().map(Self::quad_elem).collect()
    }

    fn poly_ideal(&self, gens: &[MultiPoly]) -> PolyIdeal {
        PolyIdeal::new(gens.to_vec()).expect("nonzero ideal")
    }

    /// Canonical-ish generating set: HNF basis, principal generator, or reduced
    /// Gröbner basis of the polynomial ideal.
    pub fn ideal_reduce(&self, gens: &[MultiPoly]) -> Vec<MultiPoly> {
        let gens: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return vec![];
        }
        match &self.kind {
            DomainKind::Integers { .. } => vec![self.int_big(&self.int_generator(&gens))],
            DomainKind::Quadratic { .. } => match self.lattice_of(&gens) {
                Some(l) => Self::lattice_gens(&l),
                None => gens,
            },
            DomainKind::PolyLocal { .. } => {
                if gens.iter().any(|g| self.is_unit(g)) {
                    return vec![self.one()];
                }
                prune_generators(&gens)
            }
        }
    }

    /// The reduced Gröbner basis of a local polynomial ideal, for callers
    /// that need a canonical generating set (e.g. to recognize monomial ideals).
    pub fn ideal_reduce_gb(&self, gens: &[MultiPoly]) -> Vec<MultiPoly> {
        match &self.kind {
            DomainKind::PolyLocal { .. } => {
                let gens = self.ideal_reduce(gens);
                if gens.iter().any(|g| self.is_unit(g)) {
                    return gens;
                }
                self.poly_ideal(&gens).reduced().sorted().generators().to_vec()
            }
            _ => self.ideal_reduce(gens),
        }
    }

    /// `z ∈ (gens)·D`.
    pub fn ideal_contains(&self, gens: &[MultiPoly], z: &MultiPoly) -> bool {
        if z.is_zero() {
            return true;
        }
        let gens: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return false;
        }
        match &self.kind {
            DomainKind::Integers { local } => {
                let g = Self::int_gcd(&gens);
                let x = int_of(z);
                match local {
                    None => x.is_multiple_of(&g),
                    Some(p) => vp(&x, p) >= vp(&g, p),
                }
            }
            DomainKind::Quadratic { .. } => {
                let l = self.lattice_of(&gens).expect("nonzero ideal of an order has full rank");
                l.contains(&Self::quad_vec(z))
            }
            DomainKind::PolyLocal { center, .. } => {
                let ideal = self.poly_ideal(&gens);
                if ideal.contains(z) {
                    return true;
                }
                match center {
                    Center::Global => false,
                    Center::Origin if ideal.is_homogeneous() => false,
                    _ => {
                        if gens.iter().any(|g| self.is_unit(g)) {
                            return true;
                        }
                        let colon = ideal.colon_elem(z);
                        colon.generators().iter().any(|c| self.is_unit(c))
                    }
                }
            }
        }
    }

    pub fn ideal_is_unit(&self, gens: &[MultiPoly]) -> bool {
        self.ideal_contains(gens, &self.one())
    }

    pub fn ideal_subset(&self, a: &[MultiPoly], b: &[MultiPoly]) -> bool {
        a.iter().all(|g| self.ideal_contains(b, g))
    }

    pub fn ideal_eq(&self, a: &[MultiPoly], b: &[MultiPoly]) -> bool {
        self.ideal_subset(a, b) && self.ideal_subset(b, a)
    }

    pub fn ideal_sum(&self, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
        let mut v = a.to_vec();
        v.extend_from_slice(b);
        self.ideal_reduce(&v)
    }

    pub fn ideal_product(&self, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
        let v: Vec<MultiPoly> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).map(|(x, y)| self.mul(x, y)).collect();
        self.ideal_reduce(&v)
    }

    pub fn ideal_power(&self, a: &[MultiPoly], k: u32) -> Vec<MultiPoly> {
        (0..k).fold(vec![self.one()], |acc, _| self.ideal_product(&acc, a))
    }

    pub fn ideal_scale(&self, a: &[MultiPoly], s: &MultiPoly) -> Vec<MultiPoly> {
        a.iter().map(|g| self.mul(g, s)).collect()
    }

    /// `A ∩ B` for nonzero integral ideals.
    pub fn ideal_intersect(&self, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
        match &self.kind {
            DomainKind::Integers { .. } => {
                let x = self.int_generator(a);
                let y = self.int_generator(b);
                vec![self.int_big(&x.lcm(&y))]
            }
            DomainKind::Quadratic { .. } => {
                let l = self.lattice_of(a).unwrap().intersect(&self.lattice_of(b).unwrap());
                Self::lattice_gens(&l)
            }
            DomainKind::PolyLocal { .. } => {
                if self.ideal_is_unit(a) {
                    return self.ideal_reduce(b);
                }
                if self.ideal_is_unit(b) {
                    return self.ideal_reduce(a);
                }
                self.poly_ideal(a)
                    .intersect(&self.poly_ideal(b))
                    .sorted()
                    .generators()
                    .to_vec()
            }
        }
    }

    /// `(A :_D y) = { x ∈ D | x·y ∈ A }` for nonzero `y`.
    pub fn ideal_colon_elem(&self, a: &[MultiPoly], y: &MultiPoly) -> Vec<MultiPoly> {
        assert!(!y.is_zero(), "colon by zero");
        match &self.kind {
            DomainKind::Integers { .. } => {
                let x = self.int_generator(a);
                let y = self.int_generator(std::slice::from_ref(y));
                vec![self.int_big(&(&x / x.gcd(&y)))]
            }
            DomainKind::Quadratic { d } => {
                let (p, q) = Self::quad_vec(y);
                let m = [(p.clone(), q.clone()), (&q * d, p)];
                Self::lattice_gens(&self.lattice_of(a).unwrap().preimage(&m))
            }
            DomainKind::PolyLocal { .. } => {
                if self.ideal_contains(a, y) {
                    return vec![self.one()];
                }
                self.poly_ideal(a).colon_elem(y).sorted().generators().to_vec()
            }
        }
    }

    /// `(A :_D B)` for nonzero `B`.
    pub fn ideal_colon(&self, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
        let mut acc: Option<Vec<MultiPoly>> = None;
        for g in b.iter().filter(|g| !g.is_zero()) {
            let c = self.ideal_colon_elem(a, g);
            acc = Some(match acc {
                None => c,
                Some(x) => self.ideal_intersect(&x, &c),
            });
        }
        acc.expect("colon by the zero ideal")
    }

    /// Gcd in a UFD backend; `None` on the quadratic order.
    pub fn gcd(&self, a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
        match &self.kind {
            DomainKind::Integers { .. } => Some(self.int_big(&self.int_generator(&[a.clone(), b.clone()]))),
            DomainKind::Quadratic { .. } => None,
            DomainKind::PolyLocal { .. } => Some(poly_gcd(a, b)),
        }
    }

    pub fn gcd_list(&self, gens: &[MultiPoly]) -> Option<MultiPoly> {
        let mut it = gens.iter().filter(|g| !g.is_zero());
        let first = it.next()?.clone();
        it.try_fold(first, |g, x| self.gcd(&g, x))
    }

    /// Index `[D : I]` of a nonzero ideal on the arithmetic backends.
    pub fn ideal_index(&self, gens: &[MultiPoly]) -> Option<BigInt> {
        match &self.kind {
            DomainKind::Integers { .. } => Some(self.int_generator(gens).abs()),
            DomainKind::Quadratic { .. } => self.lattice_of(gens).map(|l| l.index()),
            DomainKind::PolyLocal { .. } => None,
        }
    }

    // ---- quotient field ---------------------------------------------------

    pub fn k_from_d(&self, a: &MultiPoly) -> KElem {
        KElem {
            num: a.clone(),
            den: self.one(),
        }
    }

    /// Builds and normalizes `num / den`.
    pub fn k(&self, num: MultiPoly, den: MultiPoly) -> Result<KElem, DomainError> {
        if den.is_zero() {
            return Err(DomainError::Zero);
        }
        Ok(self.k_normalize(KElem {
            num: self.reduce(&num),
            den: self.reduce(&den),
        }))
    }

    pub fn k_normalize(&self, z: KElem) -> KElem {
        let KElem { num, den } = z;
        if num.is_zero() {
            return KElem {
                num: self.zero(),
                den: self.one(),
            };
        }
        match &self.kind {
            DomainKind::Integers { .. } => {
                let (x, y) = (int_of(&num), int_of(&den));
                let g = x.gcd(&y) * y.signum();
                KElem {
                    num: self.int_big(&(x / &g)),
                    den: self.int_big(&(y / &g)),
                }
            }
            DomainKind::Quadratic { .. } => {
                let n = self.norm(&den).unwrap();
                let t = self.mul(&num, &self.conj(&den));
                let (x, y) = Self::quad_vec(&t);
                let g = x.gcd(&y).gcd(&n) * n.signum();
                KElem {
                    num: Self::quad_elem(&(x / &g, y / &g)),
                    den: self.int_big(&(n / &g)),
                }
            }
            DomainKind::PolyLocal { .. } => {
                let g = poly_gcd(&num, &den);
                let mut num = num.div_exact(&g).unwrap();
                let mut den = den.div_exact(&g).unwrap();
                let lc = den.leading_coeff(MonomialOrder::DegRevLex);
                if !lc.is_one() {
                    let inv = lc.recip();
                    num = num.scale(&inv);
                    den = den.scale(&inv);
                }
                KElem { num, den }
            }
        }
    }

    pub fn k_is_zero(&self, z: &KElem) -> bool {
        z.num.is_zero()
    }

    pub fn k_eq(&self, a: &KElem, b: &KElem) -> bool {
        self.mul(&a.num, &b.den) == self.mul(&b.num, &a.den)
    }

    pub fn k_mul(&self, a: &KElem, b: &KElem) -> KElem {
        self.k_normalize(KElem {
            num: self.mul(&a.num, &b.num),
            den: self.mul(&a.den, &b.den),
        })
    }

    pub fn k_add(&self, a: &KElem, b: &KElem) -> KElem {
        self.k_normalize(KElem {
            num: &self.mul(&a.num, &b.den) + &self.mul(&b.num, &a.den),
            den: self.mul(&a.den, &b.den),
        })
    }

    pub fn k_neg(&self, a: &KElem) -> KElem {
        KElem {
            num: -&a.num,
            den: a.den.clone(),
        }
    }

    pub fn k_sub(&self, a: &KElem, b: &KElem) -> KElem {
        self.k_add(a, &self.k_neg(b))
    }

    pub fn k_inv(&self, a: &KElem) -> Result<KElem, DomainError> {
        self.k(a.den.clone(), a.num.clone())
    }

    pub fn k_div(&self, a: &KElem, b: &KElem) -> Result<KElem, DomainError> {
        Ok(self.k_mul(a, &self.k_inv(b)?))
    }

    /// `z ∈ D`.
    pub fn k_in_d(&self, z: &KElem) -> bool {
        self.ideal_contains(std::slice::from_ref(&z.den), &z.num)
    }

    /// A representative in `D` of an element of `D` given as a fraction.
    pub fn k_to_d(&self, z: &KElem) -> Option<MultiPoly> {
        self.div_in_d(&z.num, &z.den)
    }

    pub fn show_k(&self, z: &KElem) -> String {
        if z.den.is_one() {
            return self.show(&z.num);
        }
        let wrap = |p: &MultiPoly| {
            let s = self.show(p);
            if p.num_terms() > 1 || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&z.num), wrap(&z.den))
    }

    /// Small elements used to build samples and probes: variables, simple
    /// linear forms, and primes of small norm.
    pub fn atoms(&self) -> Vec<MultiPoly> {
        match &self.kind {
            DomainKind::Integers { .. } => [2, 3, 5, 7].iter().map(|&n| self.int(n)).collect(),
            DomainKind::Quadratic { .. } => {
                let w = self.var(0);
                vec![
                    self.int(2),
                    &self.one() + &w,
                    w.clone(),
                    &self.one() - &w,
                    &self.int(2) + &w,
                    self.int(5),
                ]
            }
            DomainKind::PolyLocal { .. } => {
                let n = self.nvars();
                let mut out: Vec<MultiPoly> = (0..n).map(|i| self.var(i)).collect();
                if n >= 2 {
                    out.push(&self.var(0) - &self.var(1));
                    out.push(&self.var(0) + &self.var(1));
                }
                out
            }
        }
    }

    /// Prime numbers whose primes of `D` can contain an ideal of the given index.
    pub fn index_primes(&self, index: &BigInt) -> Vec<BigInt> {
        small_primes_of(index)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zq() -> Domain {
        Domain::quadratic(BigInt::from(-3)).unwrap()
    }
    fn local_xy() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Domain::integers(Some(5.into())).is_ok());
        assert_eq!(
            Domain::quadratic(4.into()),
            Err(DomainError::SquareDiscriminant(4.into()))
        );
        assert!(Domain::integers(Some(6.into())).is_err());
        assert_eq!(zq().describe(), "Z[√-3]");
        assert_eq!(local_xy().describe(), "Q[X,Y]_(X,Y)");
    }

    #[test]
    fn quadratic_reduction_and_units() {
        let d = zq();
        let w = d.var(0);
        assert_eq!(d.mul(&w, &w), d.int(-3));
        assert!(d.is_unit(&d.int(-1)));
        assert!(!d.is_unit(&(&d.one() + &w)));
        assert_eq!(d.norm(&(&d.one() + &w)), Some(4.into()));
    }

    #[test]
    fn local_units_and_membership() {
        let d = local_xy();
        let (x, y) = (d.var(0), d.var(1));
        assert!(d.is_unit(&(&d.one() + &x)));
        assert!(!d.is_unit(&x));
        // X(1 + Y) generates the same ideal of the local ring as X
        let g = vec![&x * &(&d.one() + &y)];
        assert!(d.ideal_contains(&g, &x));
        assert!(!d.ideal_contains(&[x.pow(2), y.pow(2)], &(&x * &y)));
    }

    #[test]
    fn integer_local_ideals() {
        let d = Domain::integers(Some(5.into())).unwrap();
        assert!(d.ideal_is_unit(&[d.int(3)]));
        assert!(d.ideal_contains(&[d.int(10)], &d.int(5)));
        assert!(!d.ideal_contains(&[d.int(25)], &d.int(5)));
    }

    #[test]
    fn conductor_colon_in_z_sqrt_minus_3() {
        let d = zq();
        let w = d.var(0);
        let p2 = vec![d.int(2), &d.one() + &w];
        // (P2 :_D P2) contains 1; its K-colon is the maximal order
        let c = d.ideal_colon(&p2, &p2);
        assert!(d.ideal_is_unit(&c));
        // (2 : (1 + w)) = P2
        let c2 = d.ideal_colon_elem(&[d.int(2)], &(&d.one() + &w));
        assert!(d.ideal_eq(&c2, &p2));
    }

    #[test]
    fn quotient_field_normalization() {
        let d = zq();
        let w = d.var(0);
        let z = d.k(d.one(), &d.one() + &w).unwrap();
        // 1/(1+w) = (1-w)/4
        assert_eq!(z.den, d.int(4));
        assert!(!d.k_in_d(&z));
        let l = local_xy();
        let (x, y) = (l.var(0), l.var(1));
        let q = l.k(&x * &y, &x * &(&l.one() + &y)).unwrap();
        assert!(l.k_in_d(&q));
    }
}
