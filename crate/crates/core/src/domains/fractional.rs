//! Fractional ideals `(1/den)·(g_1, ..., g_k)` of a [`Domain`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int_of, vp, Domain, DomainError, DomainKind, KElem};
use crate::exact::{MonomialOrder, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FractionalIdeal {
    pub gens: Vec<MultiPoly>,
    pub den: MultiPoly,
}

impl FractionalIdeal {
    pub fn new(d: &Domain, gens: Vec<MultiPoly>, den: MultiPoly) -> Result<Self, DomainError> {
        let gens: Vec<MultiPoly> = gens
            .iter()
            .map(|g| d.check_integral(g))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        let den = d.check_integral(&den)?;
        if gens.is_empty() || den.is_zero() {
            return Err(DomainError::Zero);
        }
        Ok(FractionalIdeal { gens, den })
    }

    pub fn integral(d: &Domain, gens: Vec<MultiPoly>) -> Result<Self, DomainError> {
        Self::new(d, gens, d.one())
    }

    pub fn unit(d: &Domain) -> Self {
        FractionalIdeal {
            gens: vec![d.one()],
            den: d.one(),
        }
    }

    pub fn principal(d: &Domain, z: &KElem) -> Result<Self, DomainError> {
        Self::new(d, vec![z.num.clone()], z.den.clone())
    }

    /// The ideal generated by elements of `K`, over a common denominator.
    pub fn from_elements(d: &Domain, elems: &[KElem]) -> Result<Self, DomainError> {
        let nonzero: Vec<&KElem> = elems.iter().filter(|z| !z.num.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(DomainError::Zero);
        }
        let den = nonzero.iter().fold(d.one(), |acc, z| d.mul(&acc, &z.den));
        let gens = nonzero
            .iter()
            .map(|z| {
                let others = nonzero
                    .iter()
                    .filter(|w| !std::ptr::eq(**w, *z))
                    .fold(d.one(), |acc, w| d.mul(&acc, &w.den));
                d.mul(&z.num, &others)
            })
            .collect();
        Self::new(d, gens, den).map(|e| e.normalize(d))
    }

    /// Generators as elements of `K`.
    pub fn elements(&self, d: &Domain) -> Vec<KElem> {
        self.gens
            .iter()
            .map(|g| d.k_normalize(KElem {
                num: g.clone(),
                den: self.den.clone(),
            }))
            .collect()
    }

    pub fn contains(&self, d: &Domain, z: &KElem) -> bool {
        if z.num.is_zero() {
            return true;
        }
        // u/w ∈ (1/e)I  ⇔  e·u ∈ w·I
        let target = d.mul(&self.den, &z.num);
        let scaled = d.ideal_scale(&self.gens, &z.den);
        d.ideal_contains(&scaled, &target)
    }

    pub fn is_subset(&self, d: &Domain, other: &FractionalIdeal) -> bool {
        let scaled = d.ideal_scale(&other.gens, &self.den);
        self.gens
            .iter()
            .all(|g| d.ideal_contains(&scaled, &d.mul(g, &other.den)))
    }

    pub fn same(&self, d: &Domain, other: &FractionalIdeal) -> bool {
        self.is_subset(d, other) && other.is_subset(d, self)
    }

    pub fn is_integral(&self, d: &Domain) -> bool {
        self.gens
            .iter()
            .all(|g| d.ideal_contains(std::slice::from_ref(&self.den), g))
    }

    pub fn is_unit_ideal(&self, d: &Domain) -> bool {
        self.same(d, &Self::unit(d))
    }

    /// Integral generators when `E ⊆ D`.
    pub fn integral_gens(&self, d: &Domain) -> Result<Vec<MultiPoly>, DomainError> {
        if self.den.is_one() {
            return Ok(self.gens.clone());
        }
        self.gens
            .iter()
            .map(|g| d.div_in_d(g, &self.den).ok_or(DomainError::NotContained))
            .collect()
    }

    pub fn scale(&self, d: &Domain, z: &KElem) -> Result<FractionalIdeal, DomainError> {
        if z.num.is_zero() {
            return Err(DomainError::Zero);
        }
        Ok(FractionalIdeal {
            gens: d.ideal_scale(&self.gens, &z.num),
            den: d.mul(&self.den, &z.den),
        }
        .normalize(d))
    }

    pub fn sum(&self, d: &Domain, other: &FractionalIdeal) -> FractionalIdeal {
        let (gens, den) = if self.den == other.den {
            let mut g = self.gens.clone();
            g.extend(other.gens.iter().cloned());
            (g, self.den.clone())
        } else {
            let mut g = d.ideal_scale(&self.gens, &other.den);
            g.extend(d.ideal_scale(&other.gens, &self.den));
            (g, d.mul(&self.den, &other.den))
        };
        FractionalIdeal { gens, den }.normalize(d)
    }

    pub fn product(&self, d: &Domain, other: &FractionalIdeal) -> FractionalIdeal {
        FractionalIdeal {
            gens: d.ideal_product(&self.gens, &other.gens),
            den: d.mul(&self.den, &other.den),
        }
        .normalize(d)
    }

    pub fn power(&self, d: &Domain, k: u32) -> FractionalIdeal {
        (0..k).fold(Self::unit(d), |acc, _| acc.product(d, self))
    }

    /// `(1/e)I ∩ (1/f)J = (1/(ef))(fI ∩ eJ)`.
    pub fn intersect(&self, d: &Domain, other: &FractionalIdeal) -> FractionalIdeal {
        if self.den == other.den {
            return FractionalIdeal {
                gens: d.ideal_intersect(&self.gens, &other.gens),
                den: self.den.clone(),
            }
            .normalize(d);
        }
        let a = d.ideal_scale(&self.gens, &other.den);
        let b = d.ideal_scale(&other.gens, &self.den);
        FractionalIdeal {
            gens: d.ideal_intersect(&a, &b),
            den: d.mul(&self.den, &other.den),
        }
        .normalize(d)
    }

    /// `E ∩ D`.
    pub fn contract(&self, d: &Domain) -> FractionalIdeal {
        self.intersect(d, &Self::unit(d))
    }

    /// `(A :_K B) = { z ∈ K | zB ⊆ A }`.
    ///
    /// With `A = (1/e)I`, `B = (1/f)J` and a nonzero `g ∈ J`:
    /// `(A : B) = (f / (e·g)) · (gI :_D J)`.
    pub fn colon(&self, d: &Domain, other: &FractionalIdeal) -> FractionalIdeal {
        let g = other.gens[0].clone();
        let gi = d.ideal_scale(&self.gens, &g);
        let c = d.ideal_colon(&gi, &other.gens);
        FractionalIdeal {
            gens: d.ideal_scale(&c, &other.den),
            den: d.mul(&self.den, &g),
        }
        .normalize(d)
    }

    /// `E^{-1} = (D :_K E)`.
    pub fn dual(&self, d: &Domain) -> FractionalIdeal {
        Self::unit(d).colon(d, self)
    }

    /// Canonical representative on `Z`, `Z_(p)`, the quadratic order and the
    /// global polynomial ring; on local polynomial rings common factors are
    /// cancelled and generators reduced, and equality is decided by [`same`].
    ///
    /// [`same`]: FractionalIdeal::same
    pub fn normalize(&self, d: &Domain) -> FractionalIdeal {
        match d.kind() {
            DomainKind::Integers { local } => {
                let g = self.gens.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&int_of(x)));
                let e = int_of(&self.den);
                let (num, den) = match local {
                    None => {
                        let c = g.gcd(&e) * e.signum();
                        (g / &c, e / &c)
                    }
                    Some(p) => {
                        let k = vp(&g, p) as i64 - vp(&e, p) as i64;
                        if k >= 0 {
                            (p.pow(k as u32), BigInt::one())
                        } else {
                            (BigInt::one(), p.pow((-k) as u32))
                        }
                    }
                };
                FractionalIdeal {
                    gens: vec![d.int_big(&num)],
                    den: d.int_big(&den),
                }
            }
            DomainKind::Quadratic { .. } => {
                // make the denominator an integer, then cancel the lattice content
                let (gens, e) = if self.den.is_constant() {
                    (self.gens.clone(), int_of(&self.den))
                } else {
                    let c = d.conj(&self.den);
                    (d.ideal_scale(&self.gens, &c), d.norm(&self.den).unwrap())
                };
                let l = d.lattice_of(&gens).expect("nonzero ideal");
                let g = l.content().gcd(&e) * e.signum();
                let l = l.div_scalar(&g.abs());
                FractionalIdeal {
                    gens: l.basis().iter().map(|v| d.reduce(&quad(v))).collect(),
                    den: d.int_big(&(e / &g)),
                }
            }
            DomainKind::PolyLocal { .. } => {
                let gens = d.ideal_reduce(&self.gens);
                let g = d.gcd_list(&gens).expect("nonzero ideal");
                let c = d.gcd(&g, &self.den).unwrap();
                let mut gens: Vec<MultiPoly> = gens.iter().map(|x| x.div_exact(&c).unwrap()).collect();
                let mut den = self.den.div_exact(&c).unwrap();
                if !den.is_constant() && d.is_unit(&den) {
                    // E/u = E for a unit u
                    den = d.one();
                }
                let lc = den.leading_coeff(MonomialOrder::DegRevLex);
                if !lc.is_one() {
                    let inv = lc.recip();
                    gens = gens.iter().map(|x| x.scale(&inv)).collect();
                    den = den.scale(&inv);
                }
                let gens = d.ideal_reduce(&gens);
                FractionalIdeal { gens, den }
            }
        }
    }

    pub fn show(&self, d: &Domain) -> String {
        let inner: Vec<String> = self.gens.iter().map(|g| d.show(g)).collect();
        let body = format!("({})", inner.join(", "));
        if self.den.is_one() {
            body
        } else {
            let den = d.show(&self.den);
            if self.den.num_terms() > 1 {
                format!("1/({den})·{body}")
            } else {
                format!("1/{den}·{body}")
            }
        }
    }
}

fn quad(v: &(BigInt, BigInt)) -> MultiPoly {
    use crate::exact::Monomial;
    use num_rational::BigRational;
    MultiPoly::from_terms(
        1,
        [
            (Monomial(vec![0]), BigRational::from_integer(v.0.clone())),
            (Monomial(vec![1]), BigRational::from_integer(v.1.clone())),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse_element, Center};

    fn local() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    fn ideal(d: &Domain, elems: &[&str]) -> FractionalIdeal {
        let e: Vec<KElem> = elems.iter().map(|s| parse_element(d, s).unwrap()).collect();
        FractionalIdeal::from_elements(d, &e).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let d = local();
        let e = ideal(&d, &["1", "X"]);
        assert!(e.is_unit_ideal(&d));
        let z = Domain::integers(None).unwrap();
        let six = FractionalIdeal::new(&z, vec![z.int(6)], z.int(6)).unwrap().normalize(&z);
        assert_eq!(six, FractionalIdeal::unit(&z));
        let e = ideal(&d, &["X^2/X", "X*Y/X"]);
        assert!(e.same(&d, &ideal(&d, &["X", "Y"])));
    }

    #[test]
    fn dual_examples() {
        let z = Domain::integers(None).unwrap();
        let six = FractionalIdeal::integral(&z, vec![z.int(6)]).unwrap();
        assert_eq!(six.dual(&z), FractionalIdeal::new(&z, vec![z.int(1)], z.int(6)).unwrap());

        let q = Domain::quadratic((-3).into()).unwrap();
        let p2 = ideal(&q, &["2", "1+w"]);
        let inv = p2.dual(&q);
        assert!(inv.same(&q, &ideal(&q, &["1", "(1+w)/2"])));
        assert!(inv.dual(&q).same(&q, &p2));

        let d = local();
        assert!(ideal(&d, &["X", "Y"]).dual(&d).is_unit_ideal(&d));
    }

    #[test]
    fn colon_and_intersection() {
        let d = local();
        let e = ideal(&d, &["X^2", "X*Y"]);
        let c = e.colon(&d, &ideal(&d, &["X"]));
        assert!(c.same(&d, &ideal(&d, &["X", "Y"])));
        let i = ideal(&d, &["1/X"]).intersect(&d, &ideal(&d, &["1/Y"]));
        assert!(i.same(&d, &FractionalIdeal::unit(&d)));
    }

    #[test]
    fn scaling_commutes_with_normalization() {
        let q = Domain::quadratic((-3).into()).unwrap();
        let e = ideal(&q, &["2", "1+w"]);
        let z = parse_element(&q, "(2+w)/5").unwrap();
        let lhs = e.scale(&q, &z).unwrap();
        let rhs = FractionalIdeal::new(&q, q.ideal_scale(&e.gens, &z.num), q.mul(&e.den, &z.den)).unwrap();
        assert_eq!(lhs, rhs.normalize(&q));
        assert!(lhs.same(&q, &rhs));
    }
}
