//! Strong Gröbner bases over Z.
//!
//! Polynomials are stored as [`MultiPoly`] values whose coefficients are
//! integers. A strong basis `G` has the property that the leading term of every
//! ideal element is divisible, coefficient included, by the leading term of
//! some `g ∈ G`, so top-reduction decides membership.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::groebner::{record_instance, BasisCache};
use super::order::MonomialOrder;
use super::poly::{Monomial, MultiPoly};
use super::ExactError;

type ZTerms = Vec<(Monomial, BigInt)>;

const CACHE_LIMIT: usize = 10_000;

static CACHE: LazyLock<Mutex<BasisCache>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn to_zterms(p: &MultiPoly, order: MonomialOrder) -> Result<ZTerms, ExactError> {
    p.sorted_terms(order)
        .into_iter()
        .map(|(m, c)| {
            if c.is_integer() {
                Ok((m, c.to_integer()))
            } else {
                Err(ExactError::NonIntegral)
            }
        })
        .collect()
}

fn from_zterms(nvars: usize, t: &ZTerms) -> MultiPoly {
    MultiPoly::from_terms(
        nvars,
        t.iter().map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone()))),
    )
}

/// `a*p - c*m*q` with both term lists sorted descending under `order`.
fn combine(a: &BigInt, p: &ZTerms, c: &BigInt, m: &Monomial, q: &ZTerms, order: MonomialOrder) -> ZTerms {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let (mut i, mut j) = (0, 0);
    while i < p.len() || j < q.len() {
        let right = (j < q.len()).then(|| q[j].0.mul(m));
        let pick = match (i < p.len(), &right) {
            (true, Some(rm)) => order.cmp(&p[i].0 .0, &rm.0),
            (true, None) => std::cmp::Ordering::Greater,
            (false, _) => std::cmp::Ordering::Less,
        };
        match pick {
            std::cmp::Ordering::Greater => {
                out.push((p[i].0.clone(), a * &p[i].1));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((right.unwrap(), -(c * &q[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a * &p[i].1 - c * &q[j].1;
                if !v.is_zero() {
                    out.push((p[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn normalize_sign(mut t: ZTerms) -> ZTerms {
    if t.first().is_some_and(|(_, c)| c.is_negative()) {
        for (_, c) in &mut t {
            *c = -c.clone();
        }
    }
    t
}

/// Top-reduces `p`: leading terms are cancelled while some basis element's
/// leading monomial and coefficient both divide. Leading coefficients that are
/// only partly divisible are replaced by their remainder.
fn top_reduce(mut p: ZTerms, basis: &[ZTerms], order: MonomialOrder) -> ZTerms {
    'outer: while let Some((lm, lc)) = p.first().cloned() {
        let one = BigInt::one();
        for g in basis {
            let (gm, gc) = &g[0];
            if gm.divides(&lm) && lc.is_multiple_of(gc) {
                p = combine(&one, &p, &(&lc / gc), &lm.div(gm), g, order);
                continue 'outer;
            }
        }
        for g in basis {
            let (gm, gc) = &g[0];
            if gm.divides(&lm) {
                let q = lc.div_floor(gc);
                let r = &lc - &q * gc;
                if !q.is_zero() && r.abs() < lc.abs() {
                    p = combine(&one, &p, &q, &lm.div(gm), g, order);
                    continue 'outer;
                }
            }
        }
        break;
    }
    normalize_sign(p)
}

/// Reduces every term of `p`, not only the leading one, in the manner of
/// [`top_reduce`].
fn full_reduce(mut p: ZTerms, basis: &[&ZTerms], order: MonomialOrder) -> ZTerms {
    let one = BigInt::one();
    let mut done: ZTerms = Vec::new();
    'outer: while let Some((lm, lc)) = p.first().cloned() {
        for g in basis {
            let (gm, gc) = &g[0];
            if gm.divides(&lm) && lc.is_multiple_of(gc) {
                p = combine(&one, &p, &(&lc / gc), &lm.div(gm), g, order);
                continue 'outer;
            }
        }
        for g in basis {
            let (gm, gc) = &g[0];
            if gm.divides(&lm) {
                let q = lc.div_floor(gc);
                let r = &lc - &q * gc;
                if !q.is_zero() && r.abs() < lc.abs() {
                    p = combine(&one, &p, &q, &lm.div(gm), g, order);
                    continue 'outer;
                }
            }
        }
        done.push(p.remove(0));
    }
    normalize_sign(done)
}

fn spoly(f: &ZTerms, g: &ZTerms, order: MonomialOrder) -> ZTerms {
    let (fm, fc) = &f[0];
    let (gm, gc) = &g[0];
    let m = fm.lcm(gm);
    let c = fc.lcm(gc);
    let left = combine(&BigInt::zero(), &vec![], &(-(&c / fc)), &m.div(fm), f, order);
    combine(&BigInt::one(), &left, &(&c / gc), &m.div(gm), g, order)
}

fn gpoly(f: &ZTerms, g: &ZTerms, order: MonomialOrder) -> ZTerms {
    let (fm, fc) = &f[0];
    let (gm, gc) = &g[0];
    let m = fm.lcm(gm);
    let e = fc.extended_gcd(gc);
    let left = combine(&BigInt::zero(), &vec![], &(-e.x), &m.div(fm), f, order);
    combine(&BigInt::one(), &left, &(-e.y), &m.div(gm), g, order)
}

fn lt_divides(a: &ZTerms, b: &ZTerms) -> bool {
    a[0].0.divides(&b[0].0) && b[0].1.is_multiple_of(&a[0].1)
}

/// Buchberger's algorithm with S- and G-polynomials. Elements whose leading
/// term a newer element divides leave the basis and re-enter reduced.
fn compute(gens: &[MultiPoly], order: MonomialOrder) -> Result<Vec<MultiPoly>, ExactError> {
    let nvars = gens[0].nvars();
    let mut basis: Vec<Option<ZTerms>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut queue: Vec<ZTerms> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        queue.push(to_zterms(g, order)?);
    }
    queue.reverse();
    loop {
        let cand = if let Some(q) = queue.pop() {
            q
        } else if !pairs.is_empty() {
            // normal strategy: smallest lcm first
            let lcm = |&(i, j): &(usize, usize)| {
                let (a, b) = (basis[i].as_ref().unwrap(), basis[j].as_ref().unwrap());
                a[0].0.lcm(&b[0].0)
            };
            let pos = (0..pairs.len())
                .min_by(|&a, &b| order.cmp(&lcm(&pairs[a]).0, &lcm(&pairs[b]).0))
                .unwrap();
            let (i, j) = pairs.swap_remove(pos);
            let (f, g) = (basis[i].as_ref().unwrap(), basis[j].as_ref().unwrap());
            let ((fm, fc), (gm, gc)) = (&f[0], &g[0]);
            if !fc.is_multiple_of(gc) && !gc.is_multiple_of(fc) {
                queue.push(gpoly(f, g, order));
            }
            if fm.coprime(gm) && fc.gcd(gc).is_one() {
                continue;
            }
            spoly(f, g, order)
        } else {
            break;
        };
        let live: Vec<&ZTerms> = basis.iter().flatten().collect();
        let r = full_reduce(cand, &live, order);
        if r.is_empty() {
            continue;
        }
        for slot in basis.iter_mut() {
            if slot.as_ref().is_some_and(|g| lt_divides(&r, g)) {
                queue.push(slot.take().unwrap());
            }
        }
        pairs.retain(|&(i, j)| basis[i].is_some() && basis[j].is_some());
        let k = basis.len();
        pairs.extend((0..k).filter(|&i| basis[i].is_some()).map(|i| (i, k)));
        basis.push(Some(r));
    }
    Ok(basis.iter().flatten().map(|t| from_zterms(nvars, t)).collect())
}

/// Strong Gröbner basis over Z of the ideal generated by integer polynomials.
pub fn z_groebner_basis(gens: &[MultiPoly], order: MonomialOrder) -> Result<Vec<MultiPoly>, ExactError> {
    let first = gens.first().ok_or(ExactError::ZeroIdeal)?;
    let nvars = first.nvars();
    if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
        return Err(ExactError::ArityMismatch {
            expected: nvars,
            found: bad.nvars(),
        });
    }
    if gens.iter().all(|g| g.is_zero()) {
        return Err(ExactError::ZeroIdeal);
    }
    let key = (gens.to_vec(), order);
    if let Some(hit) = CACHE.lock().unwrap().get(&key) {
        return Ok(hit.as_ref().clone());
    }
    record_instance(gens);
    let gb = compute(gens, order)?;
    let mut cache = CACHE.lock().unwrap();
    if cache.len() > CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, Arc::new(gb.clone()));
    Ok(gb)
}

/// Ideal of Z[x_1, ..., x_n] given by integer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZIdeal {
    nvars: usize,
    gens: Vec<MultiPoly>,
}

impl ZIdeal {
    pub fn new(gens: Vec<MultiPoly>) -> Result<Self, ExactError> {
        let nvars = gens.first().ok_or(ExactError::ZeroIdeal)?.nvars();
        for g in &gens {
            if g.nvars() != nvars {
                return Err(ExactError::ArityMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            if g.terms().any(|(_, c)| !c.is_integer()) {
                return Err(ExactError::NonIntegral);
            }
        }
        let gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(ExactError::ZeroIdeal);
        }
        Ok(ZIdeal { nvars, gens })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn groebner(&self) -> Vec<MultiPoly> {
        z_groebner_basis(&self.gens, MonomialOrder::DegRevLex).expect("validated generators")
    }

    pub fn contains(&self, z: &MultiPoly) -> bool {
        if z.is_zero() {
            return true;
        }
        let Ok(t) = to_zterms(z, MonomialOrder::DegRevLex) else {
            return false;
        };
        let gb: Vec<ZTerms> = self
            .groebner()
            .iter()
            .map(|g| to_zterms(g, MonomialOrder::DegRevLex).unwrap())
            .collect();
        top_reduce(t, &gb, MonomialOrder::DegRevLex).is_empty()
    }

    pub fn is_subset(&self, other: &ZIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// `I ∩ J` by eliminating a tag variable from `t·I + (1 - t)·J`.
    pub fn intersect(&self, other: &ZIdeal) -> ZIdeal {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        if self.is_subset(other) {
            return self.clone();
        }
        if other.is_subset(self) {
            return other.clone();
        }
        let n1 = self.nvars + 1;
        let t = MultiPoly::var(n1, 0);
        let one_minus_t = &MultiPoly::one(n1) - &t;
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|g| &t * &g.prepend_vars(1)).collect();
        gens.extend(other.gens.iter().map(|g| &one_minus_t * &g.prepend_vars(1)));
        let gb = z_groebner_basis(&gens, MonomialOrder::Elimination { block: 1 })
            .expect("integral nonzero generators");
        ZIdeal {
            nvars: self.nvars,
            gens: gb.iter().filter_map(|g| g.drop_leading_vars(1)).collect(),
        }
    }

    /// `(I : f)` for a nonzero integer polynomial `f`.
    pub fn colon_elem(&self, f: &MultiPoly) -> ZIdeal {
        assert!(!f.is_zero(), "colon by zero");
        if self.contains(f) {
            return ZIdeal {
                nvars: self.nvars,
                gens: vec![MultiPoly::one(self.nvars)],
            };
        }
        let principal = ZIdeal {
            nvars: self.nvars,
            gens: vec![f.clone()],
        };
        let meet = self.intersect(&principal);
        ZIdeal {
            nvars: self.nvars,
            gens: meet
                .gens
                .iter()
                .map(|h| h.div_exact(f).expect("element of (f) is divisible by f"))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> MultiPoly {
        MultiPoly::from_int(1, n)
    }
    fn x() -> MultiPoly {
        MultiPoly::var(1, 0)
    }

    #[test]
    fn two_and_x_is_not_principal() {
        let i = ZIdeal::new(vec![int(2), x()]).unwrap();
        assert!(i.contains(&(&x() + &int(2))));
        assert!(!i.contains(&int(1)));
        assert!(!i.contains(&(&x() + &int(1))));
    }

    #[test]
    fn coefficient_gcd_is_found() {
        let i = ZIdeal::new(vec![int(4), int(6)]).unwrap();
        assert!(i.contains(&int(2)));
        assert!(!i.contains(&int(1)));
        let j = ZIdeal::new(vec![&int(2) * &x(), &int(3) * &x()]).unwrap();
        assert!(j.contains(&x()));
    }

    #[test]
    fn intersection_and_colon_over_z() {
        let a = ZIdeal::new(vec![int(2)]).unwrap();
        let b = ZIdeal::new(vec![x()]).unwrap();
        let m = a.intersect(&b);
        assert!(m.contains(&(&int(2) * &x())));
        assert!(!m.contains(&x()));
        assert!(!m.contains(&int(2)));
        // ((2X) : X) = (2)
        let c = ZIdeal::new(vec![&int(2) * &x()]).unwrap().colon_elem(&x());
        assert!(c.contains(&int(2)));
        assert!(!c.contains(&int(1)));
        // (2, X) is prime and X + 1 lies outside it
        let d = ZIdeal::new(vec![int(2), x()]).unwrap().colon_elem(&(&x() + &int(1)));
        assert!(d.contains(&int(2)) && d.contains(&x()) && !d.contains(&int(1)));
    }

    #[test]
    fn gauss_lemma_colon() {
        // (6 Z[X] : (2X + 2)) = (3)
        let six = ZIdeal::new(vec![int(6)]).unwrap();
        let c = six.colon_elem(&(&(&int(2) * &x()) + &int(2)));
        assert!(c.contains(&int(3)));
        assert!(!c.contains(&int(1)));
    }

    #[test]
    fn rejects_fractional_coefficients() {
        let half = MultiPoly::constant(1, BigRational::new(1.into(), 2.into()));
        assert_eq!(ZIdeal::new(vec![half]), Err(ExactError::NonIntegral));
    }
}
