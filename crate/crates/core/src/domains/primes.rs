//! Prime ideals with a recorded reason for primality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{int_of, is_prime_int, Center, Domain, DomainError, DomainKind};
use crate::exact::{MultiPoly, PolyIdeal};

/// Why a generating set is known to be prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeCert {
    /// `(p)` for a rational prime `p`.
    IntegerPrime,
    /// Index `p` in the quadratic order, so the residue ring is `F_p`.
    PrimeIndex,
    /// `(p)` with `p` inert: the residue ring is `F_{p²}`.
    Inert,
    /// Generated by affine-linear forms; the residue ring is a polynomial ring.
    LinearForms,
    /// `(f)` with `f = c·x_i + r`, `c` a nonzero constant and `r` free of `x_i`.
    PrincipalIrreducible,
    /// Taken on trust from the caller.
    UserAsserted,
    /// A prime of the ambient ring meeting the localizing set: `P·D = D`.
    ExtendsToUnit,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub gens: Vec<MultiPoly>,
    pub cert: PrimeCert,
}

/// Primality certificate for an ideal of `Q[x]`, if one of the cheap
/// criteria applies.
pub fn certify_poly_prime(p: &PolyIdeal) -> Option<PrimeCert> {
    if p.is_unit() {
        return None;
    }
    let gens = p.generators();
    if gens.iter().all(|g| g.total_degree() <= 1) {
        return Some(PrimeCert::LinearForms);
    }
    let reduced = p.reduced();
    if let [f] = reduced.generators() {
        let linear_in = (0..f.nvars()).any(|i| {
            f.degree_in(i) == 1 && {
                let c = &f.coefficients_in(i)[1];
                c.is_constant() && !c.is_zero()
            }
        });
        if linear_in {
            return Some(PrimeCert::PrincipalIrreducible);
        }
    }
    None
}

/// Whether the odd prime `p ∤ d` stays inert in `Z[√d]` (Euler's criterion).
fn is_inert(d: &BigInt, p: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *p == two || d.is_multiple_of(p) {
        return false;
    }
    let e = (p - 1u32) / &two;
    d.mod_floor(p).modpow(&e, p) == p - 1u32
}

impl PrimeIdeal {
    /// Certifies `gens` as a prime of `d`, or reports why it cannot.
    pub fn new(d: &Domain, gens: Vec<MultiPoly>) -> Result<PrimeIdeal, DomainError> {
        let gens = gens
            .iter()
            .map(|g| d.check_integral(g))
            .collect::<Result<Vec<_>, _>>()?;
        let shown = || {
            let v: Vec<String> = gens.iter().map(|g| d.show(g)).collect();
            format!("({})", v.join(", "))
        };
        if gens.iter().all(|g| g.is_zero()) {
            return Err(DomainError::Zero);
        }
        let cert = match d.kind() {
            DomainKind::Integers { local } => {
                // the generator as an integer, before normalizing to p^k on Z_(p)
                let g = gens.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&int_of(x)));
                if !is_prime_int(&g) {
                    return Err(DomainError::NotPrime(shown()));
                }
                match local {
                    Some(p) if *p != g => PrimeCert::ExtendsToUnit,
                    _ => PrimeCert::IntegerPrime,
                }
            }
            DomainKind::Quadratic { d: disc } => {
                let l = d.lattice_of(&gens).ok_or(DomainError::Zero)?;
                let n = l.index();
                if is_prime_int(&n) {
                    PrimeCert::PrimeIndex
                } else {
                    let p = n.sqrt();
                    let ok = &p * &p == n && is_prime_int(&p) && l == super::Lattice::scalar(&p) && is_inert(disc, &p);
                    if !ok {
                        return Err(DomainError::NotPrime(shown()));
                    }
                    PrimeCert::Inert
                }
            }
            DomainKind::PolyLocal { .. } => {
                let ideal = PolyIdeal::new(gens.clone())?;
                let cert = certify_poly_prime(&ideal).ok_or_else(|| DomainError::NotPrime(shown()))?;
                if Self::meets_units(d, &gens) {
                    PrimeCert::ExtendsToUnit
                } else {
                    cert
                }
            }
        };
        let gens = if cert == PrimeCert::ExtendsToUnit { gens } else { d.ideal_reduce(&gens) };
        Ok(PrimeIdeal { gens, cert })
    }

    /// A prime taken on trust; the ideal must still be proper.
    pub fn asserted(d: &Domain, gens: Vec<MultiPoly>) -> Result<PrimeIdeal, DomainError> {
        if let Ok(p) = Self::new(d, gens.clone()) {
            return Ok(p);
        }
        let gens = d.ideal_reduce(&gens);
        if gens.is_empty() {
            return Err(DomainError::Zero);
        }
        if d.ideal_is_unit(&gens) {
            return Err(DomainError::NotPrime("the unit ideal".into()));
        }
        Ok(PrimeIdeal {
            gens,
            cert: PrimeCert::UserAsserted,
        })
    }

    /// Whether some generator of an ambient-ring prime is a unit of `D`.
    fn meets_units(d: &Domain, gens: &[MultiPoly]) -> bool {
        let DomainKind::PolyLocal { center, .. } = d.kind() else {
            return false;
        };
        match center {
            Center::Global => false,
            Center::Origin => gens.iter().any(|g| !g.constant_term().is_zero()),
            Center::Prime(c) => gens.iter().any(|g| !c.contains(g)),
        }
    }

    /// The maximal ideal of a local backend.
    pub fn center(d: &Domain) -> Option<PrimeIdeal> {
        let (gens, cert) = match d.kind() {
            DomainKind::Integers { local: Some(p) } => (vec![d.int_big(p)], PrimeCert::IntegerPrime),
            DomainKind::PolyLocal { center: Center::Origin, .. } => {
                ((0..d.nvars()).map(|i| d.var(i)).collect(), PrimeCert::LinearForms)
            }
            DomainKind::PolyLocal { center: Center::Prime(c), .. } => {
                (c.generators().to_vec(), certify_poly_prime(c).expect("validated at construction"))
            }
            _ => return None,
        };
        Some(PrimeIdeal {
            gens: d.ideal_reduce(&gens),
            cert,
        })
    }

    /// The primes of the quadratic order above the rational prime `p`; on the
    /// integer backends, `(p)` itself.
    pub fn above(d: &Domain, p: &BigInt) -> Vec<PrimeIdeal> {
        match d.kind() {
            DomainKind::Quadratic { d: disc } => {
                if is_inert(disc, p) {
                    return vec![PrimeIdeal::new(d, vec![d.int_big(p)]).expect("inert prime")];
                }
                let w = d.var(0);
                let mut out: Vec<PrimeIdeal> = Vec::new();
                let mut a = BigInt::zero();
                while &a < p {
                    if (&a * &a - disc).is_multiple_of(p) {
                        let gens = vec![d.int_big(p), &w - &d.int_big(&a)];
                        let q = PrimeIdeal::new(d, gens).expect("index-p ideal");
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                    a += 1;
                }
                out
            }
            _ => PrimeIdeal::new(d, vec![d.int_big(p)]).into_iter().collect(),
        }
    }

    /// Whether `P·D` is proper.
    pub fn is_proper(&self) -> bool {
        self.cert != PrimeCert::ExtendsToUnit
    }

    pub fn contains(&self, d: &Domain, x: &MultiPoly) -> bool {
        d.ideal_contains(&self.gens, x)
    }

    /// `I ⊆ P` for an integral ideal.
    pub fn contains_ideal(&self, d: &Domain, gens: &[MultiPoly]) -> bool {
        gens.iter().all(|g| self.contains(d, g))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, d: &Domain, other: &PrimeIdeal) -> bool {
        other.contains_ideal(d, &self.gens)
    }

    /// Single generator of a principal prime, when visibly principal.
    pub fn principal_generator(&self) -> Option<&MultiPoly> {
        match (&self.cert, self.gens.as_slice()) {
            (PrimeCert::IntegerPrime | PrimeCert::PrincipalIrreducible, [f]) => Some(f),
            (PrimeCert::LinearForms, [f]) if !f.is_constant() => Some(f),
            _ => None,
        }
    }

    pub fn show(&self, d: &Domain) -> String {
        let v: Vec<String> = self.gens.iter().map(|g| d.show(g)).collect();
        format!("({})", v.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::parse_poly;

    fn names() -> Vec<String> {
        vec!["X".into(), "Y".into()]
    }

    fn ideal(gens: &[&str]) -> PolyIdeal {
        PolyIdeal::new(gens.iter().map(|g| parse_poly(g, &names()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn polynomial_certificates() {
        assert_eq!(certify_poly_prime(&ideal(&["X", "Y"])), Some(PrimeCert::LinearForms));
        assert_eq!(certify_poly_prime(&ideal(&["X - Y^2"])), Some(PrimeCert::PrincipalIrreducible));
        assert_eq!(certify_poly_prime(&ideal(&["X*Y"])), None);
        assert_eq!(certify_poly_prime(&ideal(&["X", "X - 1"])), None);
    }

    #[test]
    fn primes_of_z_sqrt_minus_3() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let above2 = PrimeIdeal::above(&d, &2.into());
        assert_eq!(above2.len(), 1);
        assert_eq!(above2[0].cert, PrimeCert::PrimeIndex);
        let above7 = PrimeIdeal::above(&d, &7.into());
        assert_eq!(above7.len(), 2);
        let above5 = PrimeIdeal::above(&d, &5.into());
        assert_eq!(above5[0].cert, PrimeCert::Inert);
        assert!(PrimeIdeal::new(&d, vec![d.int(2)]).is_err());
    }

    #[test]
    fn localized_candidates() {
        let z5 = Domain::integers(Some(5.into())).unwrap();
        assert_eq!(PrimeIdeal::new(&z5, vec![z5.int(3)]).unwrap().cert, PrimeCert::ExtendsToUnit);
        assert!(PrimeIdeal::new(&z5, vec![z5.int(5)]).unwrap().is_proper());
        let d = Domain::poly(names(), Center::Origin).unwrap();
        let p = PrimeIdeal::new(&d, vec![parse_poly("X - 1", &names()).unwrap()]).unwrap();
        assert!(!p.is_proper());
        let m = PrimeIdeal::center(&d).unwrap();
        let x = PrimeIdeal::new(&d, vec![d.var(0)]).unwrap();
        assert!(x.is_subset(&d, &m));
        assert_eq!(x.principal_generator(), Some(&d.var(0)));
    }
}
