//! Explicit valuations on the quotient field: monomial weights, two-row
//! lexicographic monomial valuations, and discrete valuations along a
//! principal prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{int_of, vp, Domain, DomainError, DomainKind, FractionalIdeal, KElem, PrimeIdeal};
use crate::exact::{Monomial, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValuationSpec {
    /// `v(x^e) = w·e`, extended by the minimum over terms.
    MonomialWeight(Vec<BigRational>),
    /// `v(x^e) = (r0·e, r1·e)` in `Z²` ordered lexicographically.
    LexMonomial([Vec<i64>; 2]),
    /// Order of vanishing along a prime element `f`.
    DvrAlongPrime(MultiPoly),
}

/// A value in the group of a [`ValuationSpec`]; only values of the same
/// valuation are compared.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Rat(BigRational),
    Lex(BigInt, BigInt),
}

impl Value {
    pub fn sub(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a - b),
            (Value::Lex(a, b), Value::Lex(c, d)) => Value::Lex(a - c, b - d),
            _ => panic!("values of different valuations"),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Value::Rat(a) => a.is_positive(),
            Value::Lex(a, b) => a.is_positive() || (a.is_zero() && b.is_positive()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(a) => write!(f, "{a}"),
            Value::Lex(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

fn dot_rat(w: &[BigRational], m: &Monomial) -> BigRational {
    w.iter()
        .zip(&m.0)
        .fold(BigRational::zero(), |acc, (wi, &e)| acc + wi * BigRational::from_integer(e.into()))
}

fn dot_int(r: &[i64], m: &Monomial) -> BigInt {
    r.iter().zip(&m.0).map(|(&a, &e)| BigInt::from(a) * e).sum()
}

impl ValuationSpec {
    /// Checks that the valuation ring contains `D`.
    pub fn validate(&self, d: &Domain) -> Result<(), DomainError> {
        let n = d.nvars();
        let unsupported = |what: &str| Err(DomainError::Unsupported(format!("{what} on {}", d.describe())));
        match self {
            ValuationSpec::MonomialWeight(w) => {
                if !d.is_poly() {
                    return unsupported("monomial valuations");
                }
                if w.len() != n || w.iter().any(|x| x.is_negative()) || w.iter().all(|x| x.is_zero()) {
                    return Err(DomainError::Unsupported(
                        "weights must be non-negative, not all zero, one per variable".into(),
                    ));
                }
            }
            ValuationSpec::LexMonomial(rows) => {
                if !d.is_poly() {
                    return unsupported("monomial valuations");
                }
                let ok = rows.iter().all(|r| r.len() == n && r.iter().all(|&x| x >= 0))
                    && rows.iter().any(|r| r.iter().any(|&x| x != 0));
                if !ok {
                    return Err(DomainError::Unsupported(
                        "lexicographic rows must be non-negative, not both zero, one entry per variable".into(),
                    ));
                }
            }
            ValuationSpec::DvrAlongPrime(f) => match d.kind() {
                DomainKind::Quadratic { .. } => return unsupported("discrete valuations"),
                _ => {
                    let p = PrimeIdeal::new(d, vec![f.clone()])?;
                    if p.principal_generator().is_none() || !p.is_proper() {
                        return Err(DomainError::NotPrime(d.show(f)));
                    }
                }
            },
        }
        // the center must lie in the maximal ideal of a local D
        if let Some(m) = PrimeIdeal::center(d) {
            if !m.contains_ideal(d, &self.center_gens(d)) {
                return Err(DomainError::NotContained);
            }
        }
        Ok(())
    }

    /// `v(p)` for a nonzero element of `D`.
    pub fn value_d(&self, d: &Domain, p: &MultiPoly) -> Value {
        assert!(!p.is_zero(), "valuation of zero");
        match self {
            ValuationSpec::MonomialWeight(w) => Value::Rat(p.terms().map(|(m, _)| dot_rat(w, m)).min().unwrap()),
            ValuationSpec::LexMonomial([r0, r1]) => p
                .terms()
                .map(|(m, _)| Value::Lex(dot_int(r0, m), dot_int(r1, m)))
                .min()
                .unwrap(),
            ValuationSpec::DvrAlongPrime(f) => {
                let k = if d.is_poly() {
                    let mut q = p.clone();
                    let mut k = 0u32;
                    while let Some(r) = q.div_exact(f) {
                        q = r;
                        k += 1;
                    }
                    k
                } else {
                    vp(&int_of(p), &int_of(f))
                };
                Value::Rat(BigRational::from_integer(k.into()))
            }
        }
    }

    /// `v(z)` for a nonzero element of `K`.
    pub fn value(&self, d: &Domain, z: &KElem) -> Value {
        self.value_d(d, &z.num).sub(&self.value_d(d, &z.den))
    }

    /// `min v(E) = v` of a generator of the principal ideal `E·V`.
    pub fn min_value(&self, d: &Domain, e: &FractionalIdeal) -> Value {
        let g = e.gens.iter().map(|g| self.value_d(d, g)).min().expect("nonzero ideal");
        g.sub(&self.value_d(d, &e.den))
    }

    /// `z ∈ E·V`.
    pub fn extension_contains(&self, d: &Domain, e: &FractionalIdeal, z: &KElem) -> bool {
        z.num.is_zero() || self.value(d, z) >= self.min_value(d, e)
    }

    /// Generators of the center `m_V ∩ D`.
    pub fn center_gens(&self, d: &Domain) -> Vec<MultiPoly> {
        match self {
            ValuationSpec::MonomialWeight(w) => (0..w.len()).filter(|&i| w[i].is_positive()).map(|i| d.var(i)).collect(),
            ValuationSpec::LexMonomial([r0, r1]) => (0..r0.len())
                .filter(|&i| r0[i] != 0 || r1[i] != 0)
                .map(|i| d.var(i))
                .collect(),
            ValuationSpec::DvrAlongPrime(f) => vec![f.clone()],
        }
    }

    /// `D_P ⊆ V`, i.e. the center of `V` on `D` lies in `P`.
    pub fn is_overring_of_localization(&self, d: &Domain, p: &PrimeIdeal) -> bool {
        p.contains_ideal(d, &self.center_gens(d))
    }

    /// `{ h ∈ D | v(h) ≥ γ }` as an integral ideal.
    pub fn contraction(&self, d: &Domain, gamma: &Value) -> Vec<MultiPoly> {
        let zero_like = match gamma {
            Value::Rat(_) => Value::Rat(BigRational::zero()),
            Value::Lex(..) => Value::Lex(BigInt::zero(), BigInt::zero()),
        };
        if *gamma <= zero_like {
            return vec![d.one()];
        }
        match self {
            ValuationSpec::DvrAlongPrime(f) => {
                let Value::Rat(g) = gamma else { unreachable!() };
                let k = g.ceil().to_integer().to_u32().expect("small exponent");
                vec![d.pow(f, k)]
            }
            _ => self.monomial_contraction(d, gamma),
        }
    }

    /// Minimal monomials of value `≥ γ`. Lowering any exponent beyond the
    /// per-variable bound keeps the value `≥ γ`, so minimal ones lie in the box.
    fn monomial_contraction(&self, d: &Domain, gamma: &Value) -> Vec<MultiPoly> {
        let n = d.nvars();
        let ceil_div = |a: &BigRational, b: &BigRational| (a / b).ceil().to_integer().to_u32().unwrap_or(0);
        let bounds: Vec<u32> = match (self, gamma) {
            (ValuationSpec::MonomialWeight(w), Value::Rat(g)) => {
                (0..n).map(|i| if w[i].is_positive() { ceil_div(g, &w[i]) } else { 0 }).collect()
            }
            (ValuationSpec::LexMonomial([r0, r1]), Value::Lex(g0, g1)) => (0..n)
                .map(|i| {
                    let a = if r0[i] > 0 { (g0 + 1u32).max(BigInt::zero()).div_ceil(&r0[i].into()) } else { BigInt::zero() };
                    let b = if r1[i] > 0 { g1.max(&BigInt::zero()).div_ceil(&r1[i].into()) } else { BigInt::zero() };
                    a.max(b).to_u32().unwrap_or(0)
                })
                .collect(),
            _ => panic!("value of a different valuation"),
        };
        let mut found: Vec<Monomial> = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            let m = Monomial(e.clone());
            let ok = self.value_d(d, &MultiPoly::term(n, m.clone(), BigRational::from_integer(1.into()))) >= *gamma;
            if ok && !found.iter().any(|f| f.divides(&m)) {
                found.retain(|f| !m.divides(f));
                found.push(m);
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == n {
                    return found.into_iter().map(|m| MultiPoly::term(n, m, BigRational::from_integer(1.into()))).collect();
                }
                if e[i] < bounds[i] {
                    e[i] += 1;
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    pub fn show(&self, d: &Domain) -> String {
        match self {
            ValuationSpec::MonomialWeight(w) => {
                let v: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                format!("weight({})", v.join(", "))
            }
            ValuationSpec::LexMonomial([r0, r1]) => format!("lex({r0:?}, {r1:?})"),
            ValuationSpec::DvrAlongPrime(f) => format!("dvr({})", d.show(f)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse_element, Center};

    fn d() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn values_of_monomial_valuations() {
        let d = d();
        let v = ValuationSpec::MonomialWeight(vec![rat(1), rat(2)]);
        v.validate(&d).unwrap();
        let z = parse_element(&d, "(X^3 + Y)/X").unwrap();
        assert_eq!(v.value(&d, &z), Value::Rat(rat(1)));
        let lex = ValuationSpec::LexMonomial([vec![1, 0], vec![0, 1]]);
        let z = parse_element(&d, "Y^5 + X*Y").unwrap();
        assert_eq!(lex.value(&d, &z), Value::Lex(0.into(), 5.into()));
    }

    #[test]
    fn dvr_values_and_validation() {
        let d = d();
        let x_minus_y = parse_element(&d, "X - Y").unwrap().num;
        let v = ValuationSpec::DvrAlongPrime(x_minus_y.clone());
        v.validate(&d).unwrap();
        let z = parse_element(&d, "(X^2 - Y^2)/(X - Y)^3").unwrap();
        assert_eq!(v.value(&d, &z), Value::Rat(rat(-2)));
        let one_plus_x = parse_element(&d, "1 + X").unwrap().num;
        assert!(ValuationSpec::DvrAlongPrime(one_plus_x).validate(&d).is_err());
        assert!(ValuationSpec::MonomialWeight(vec![rat(-1), rat(1)]).validate(&d).is_err());
    }

    #[test]
    fn contractions_are_monomial_ideals() {
        let d = d();
        let v = ValuationSpec::MonomialWeight(vec![rat(1), rat(2)]);
        let c = v.contraction(&d, &Value::Rat(rat(2)));
        let want: Vec<MultiPoly> = ["X^2", "Y"].iter().map(|s| parse_element(&d, s).unwrap().num).collect();
        assert!(d.ideal_eq(&c, &want));
        let lex = ValuationSpec::LexMonomial([vec![1, 0], vec![0, 1]]);
        let c = lex.contraction(&d, &Value::Lex(1.into(), 0.into()));
        assert!(d.ideal_eq(&c, &[d.var(0)]));
        let c = lex.contraction(&d, &Value::Lex(0.into(), 2.into()));
        let want: Vec<MultiPoly> = ["X", "Y^2"].iter().map(|s| parse_element(&d, s).unwrap().num).collect();
        assert!(d.ideal_eq(&c, &want));
    }

    #[test]
    fn overring_of_localization() {
        let d = d();
        let py = PrimeIdeal::new(&d, vec![d.var(1)]).unwrap();
        assert!(ValuationSpec::MonomialWeight(vec![rat(0), rat(3)]).is_overring_of_localization(&d, &py));
        assert!(!ValuationSpec::MonomialWeight(vec![rat(1), rat(3)]).is_overring_of_localization(&d, &py));
    }
}
