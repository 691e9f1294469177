//! Extension of a fractional ideal to a localization `D_P`, and its
//! contraction back to `D`.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::exact::MultiPoly;

use super::{int_of, vp, Domain, DomainError, DomainKind, FractionalIdeal, KElem, PrimeIdeal};

/// Membership oracle for `E·D_P`.
#[derive(Clone, Debug)]
pub struct LocalOracle {
    pub ideal: FractionalIdeal,
    pub prime: PrimeIdeal,
    /// `E·D_P ∩ D` when it has a closed form.
    pub contraction: Option<FractionalIdeal>,
}

impl LocalOracle {
    /// With `z = u/w` and `E = (1/e)I`: `z ∈ E·D_P ⇔ (wI :_D eu) ⊄ P`.
    pub fn contains(&self, d: &Domain, z: &KElem) -> bool {
        if z.num.is_zero() {
            return true;
        }
        let y = d.mul(&self.ideal.den, &z.num);
        let wi = d.ideal_scale(&self.ideal.gens, &z.den);
        let colon = d.ideal_colon_elem(&wi, &y);
        !self.prime.contains_ideal(d, &colon)
    }

    /// `E·D_P ⊆ F·D_P`, decided on the generators of `E`.
    pub fn is_subset(&self, d: &Domain, other: &LocalOracle) -> bool {
        self.ideal.elements(d).iter().all(|g| other.contains(d, g))
    }
}

/// Order of a nonzero element along a principal prime `f`.
fn order_along(d: &Domain, f: &MultiPoly, x: &MultiPoly) -> i64 {
    if d.is_poly() {
        let mut q = x.clone();
        let mut k = 0;
        while let Some(r) = q.div_exact(f) {
            q = r;
            k += 1;
        }
        k
    } else {
        vp(&int_of(x), &int_of(f)).into()
    }
}

pub fn localize_contract(d: &Domain, e: &FractionalIdeal, p: &PrimeIdeal) -> Result<LocalOracle, DomainError> {
    if !p.is_proper() {
        return Err(DomainError::NotPrime(format!("{} extends to D", p.show(d))));
    }
    let is_center = PrimeIdeal::center(d).is_some_and(|m| m.is_subset(d, p));
    let contraction = if is_center {
        // D_P = D
        Some(e.contract(d))
    } else if let (Some(f), true) = (p.principal_generator(), d.has_gcd()) {
        // D_P is a DVR with uniformizer f
        let g = d.gcd_list(&e.gens).expect("nonzero ideal");
        let k = order_along(d, f, &g) - order_along(d, f, &e.den);
        let gens = if k <= 0 { vec![d.one()] } else { vec![d.pow(f, k as u32)] };
        Some(FractionalIdeal::integral(d, gens)?)
    } else if let DomainKind::Quadratic { .. } = d.kind() {
        // primes of other residue characteristic see an index coprime to p
        let index = d.ideal_index(&e.contract(d).gens).unwrap_or_else(|| BigInt::from(1));
        let q = d.ideal_index(&p.gens).map(|n| n.abs()).unwrap();
        let qp = super::small_primes_of(&q);
        let coprime = super::small_primes_of(&index).iter().all(|r| !qp.contains(r));
        (e.is_integral(d) && coprime).then(|| FractionalIdeal::unit(d))
    } else {
        None
    };
    Ok(LocalOracle {
        ideal: e.clone(),
        prime: p.clone(),
        contraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse_element, Center};

    fn ideal(d: &Domain, elems: &[&str]) -> FractionalIdeal {
        let e: Vec<KElem> = elems.iter().map(|s| parse_element(d, s).unwrap()).collect();
        FractionalIdeal::from_elements(d, &e).unwrap()
    }

    #[test]
    fn localization_at_a_height_one_prime() {
        let d = Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap();
        let px = PrimeIdeal::new(&d, vec![d.var(0)]).unwrap();
        let e = ideal(&d, &["X^2", "X*Y"]);
        let o = localize_contract(&d, &e, &px).unwrap();
        assert!(o.contains(&d, &parse_element(&d, "X").unwrap()));
        assert!(!o.contains(&d, &parse_element(&d, "1").unwrap()));
        assert!(o.contraction.unwrap().same(&d, &ideal(&d, &["X"])));
        let py = PrimeIdeal::new(&d, vec![d.var(1)]).unwrap();
        let o = localize_contract(&d, &e, &py).unwrap();
        assert!(o.contains(&d, &parse_element(&d, "1").unwrap()));
    }

    #[test]
    fn localization_of_the_quadratic_order() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let p2 = PrimeIdeal::above(&d, &2.into()).remove(0);
        let e = ideal(&d, &["2"]);
        let o = localize_contract(&d, &e, &p2).unwrap();
        assert!(!o.contains(&d, &parse_element(&d, "1").unwrap()));
        assert!(o.contains(&d, &parse_element(&d, "2*w").unwrap()));
        // D_P is not integrally closed at the conductor: (1+w)/2 is missing
        assert!(!o.contains(&d, &parse_element(&d, "1+w").unwrap()));
        let p7 = PrimeIdeal::above(&d, &7.into()).remove(0);
        let o = localize_contract(&d, &e, &p7).unwrap();
        assert!(o.contains(&d, &parse_element(&d, "1").unwrap()));
        assert!(o.contraction.unwrap().is_unit_ideal(&d));
    }

    #[test]
    fn rejects_primes_meeting_the_units() {
        let d = Domain::integers(Some(5.into())).unwrap();
        let p3 = PrimeIdeal::new(&d, vec![d.int(3)]).unwrap();
        assert!(localize_contract(&d, &FractionalIdeal::unit(&d), &p3).is_err());
    }
}
