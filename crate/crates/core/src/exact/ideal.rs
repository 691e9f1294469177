//! Ideals of Q[x_1, ..., x_n] and the operations higher layers consume:
//! membership, sum, product, intersection, colon and saturation.

use std::fmt;

use super::gcd::{poly_gcd, poly_gcd_list};
use super::groebner::{groebner_basis, normal_form};
use super::order::MonomialOrder;
use super::poly::{cmp_polys, MultiPoly};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyIdeal {
    nvars: usize,
    gens: Vec<MultiPoly>,
}

/// How [`PolyIdeal::combine`] merges two ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Product,
}

impl PolyIdeal {
    /// Ideal generated by `gens`; zero generators are dropped.
    pub fn new(gens: Vec<MultiPoly>) -> Result<Self, ExactError> {
        let first = gens.first().ok_or(ExactError::ZeroIdeal)?;
        let nvars = first.nvars();
        if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(ExactError::ArityMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        let gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(ExactError::ZeroIdeal);
        }
        Ok(PolyIdeal { nvars, gens })
    }

    pub fn principal(g: MultiPoly) -> Result<Self, ExactError> {
        Self::new(vec![g])
    }

    pub fn unit(nvars: usize) -> Self {
        PolyIdeal {
            nvars,
            gens: vec![MultiPoly::one(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn groebner(&self, order: MonomialOrder) -> Vec<MultiPoly> {
        groebner_basis(&self.gens, order).expect("nonzero ideal of uniform arity")
    }

    /// `I = c·I'` with `c` the nonconstant gcd of the generators.
    fn split_common_factor(&self) -> Option<(MultiPoly, PolyIdeal)> {
        let c = poly_gcd_list(&self.gens)?;
        if c.is_constant() {
            return None;
        }
        let gens = self.gens.iter().map(|g| g.div_exact(&c).expect("gcd divides")).collect();
        Some((c, PolyIdeal { nvars: self.nvars, gens }))
    }

    fn scaled(&self, c: &MultiPoly) -> PolyIdeal {
        PolyIdeal {
            nvars: self.nvars,
            gens: self.gens.iter().map(|g| g * c).collect(),
        }
    }

    /// The same ideal on pruned generators, computed without a Gröbner basis.
    pub fn pruned(&self) -> PolyIdeal {
        PolyIdeal {
            nvars: self.nvars,
            gens: prune_generators(&self.gens),
        }
    }

    /// Reduced degrevlex basis; a canonical generating set.
    pub fn reduced(&self) -> PolyIdeal {
        PolyIdeal {
            nvars: self.nvars,
            gens: self.groebner(MonomialOrder::DegRevLex),
        }
    }

    pub fn contains(&self, z: &MultiPoly) -> bool {
        assert_eq!(z.nvars(), self.nvars, "arity mismatch in membership test");
        if z.is_zero() || self.gens.iter().any(|g| g.is_constant()) {
            return true;
        }
        if self.is_monomial() {
            return z.terms().all(|(m, _)| self.gens.iter().any(|g| g.terms().next().unwrap().0.divides(m)));
        }
        if let [g] = self.gens.as_slice() {
            return z.div_exact(g).is_some();
        }
        if let Some((c, rest)) = self.split_common_factor() {
            return z.div_exact(&c).is_some_and(|w| rest.contains(&w));
        }
        let gb = self.groebner(MonomialOrder::DegRevLex);
        normal_form(z, &gb, MonomialOrder::DegRevLex).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner(MonomialOrder::DegRevLex)
            .iter()
            .any(|g| g.is_constant())
    }

    pub fn is_subset(&self, other: &PolyIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_ideal(&self, other: &PolyIdeal) -> bool {
        self.groebner(MonomialOrder::DegRevLex) == other.groebner(MonomialOrder::DegRevLex)
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_monomial())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn combine(&self, other: &PolyIdeal, mode: Combine) -> PolyIdeal {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        let gens = match mode {
            Combine::Sum => self.gens.iter().chain(&other.gens).cloned().collect(),
            Combine::Product => self
                .gens
                .iter()
                .flat_map(|a| other.gens.iter().map(move |b| a * b))
                .collect(),
        };
        PolyIdeal {
            nvars: self.nvars,
            gens,
        }
    }

    pub fn sum(&self, other: &PolyIdeal) -> PolyIdeal {
        self.combine(other, Combine::Sum)
    }

    pub fn product(&self, other: &PolyIdeal) -> PolyIdeal {
        self.combine(other, Combine::Product)
    }

    pub fn power(&self, k: u32) -> PolyIdeal {
        let mut acc = PolyIdeal::unit(self.nvars);
        for _ in 0..k {
            acc = acc.product(self).reduced();
        }
        acc
    }

    /// `I ∩ J` by eliminating a tag variable from `t·I + (1 - t)·J`.
    pub fn intersect(&self, other: &PolyIdeal) -> PolyIdeal {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        if self.is_subset(other) {
            return self.clone();
        }
        if other.is_subset(self) {
            return other.clone();
        }
        if self.is_monomial() && other.is_monomial() {
            let lead = |g: &MultiPoly| g.terms().next().unwrap().0.clone();
            let gens = self
                .gens
                .iter()
                .flat_map(|a| other.gens.iter().map(move |b| MultiPoly::term(a.nvars(), lead(a).lcm(&lead(b)), num_traits::One::one())))
                .collect();
            return PolyIdeal { nvars: self.nvars, gens }.pruned();
        }
        if let ([a], [b]) = (self.gens.as_slice(), other.gens.as_slice()) {
            let lcm = (a * b).div_exact(&poly_gcd(a, b)).expect("gcd divides the product");
            return PolyIdeal { nvars: self.nvars, gens: vec![lcm] }.pruned();
        }
        // cA ∩ c'B = g·((c/g)A ∩ (c'/g)B) with g = gcd(c, c')
        let (ca, ra) = self.split_common_factor().unwrap_or_else(|| (MultiPoly::one(self.nvars), self.clone()));
        let (cb, rb) = other.split_common_factor().unwrap_or_else(|| (MultiPoly::one(self.nvars), other.clone()));
        let g = poly_gcd(&ca, &cb);
        if !g.is_constant() {
            let a = ra.scaled(&ca.div_exact(&g).unwrap());
            let b = rb.scaled(&cb.div_exact(&g).unwrap());
            return a.intersect(&b).scaled(&g).pruned();
        }
        let n1 = self.nvars + 1;
        let t = MultiPoly::var(n1, 0);
        let one_minus_t = &MultiPoly::one(n1) - &t;
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|g| &t * &g.prepend_vars(1)).collect();
        gens.extend(other.gens.iter().map(|g| &one_minus_t * &g.prepend_vars(1)));
        let gb = groebner_basis(&gens, MonomialOrder::Elimination { block: 1 })
            .expect("nonzero generators");
        let elim: Vec<MultiPoly> = gb.iter().filter_map(|g| g.drop_leading_vars(1)).collect();
        PolyIdeal {
            nvars: self.nvars,
            gens: elim,
        }
        .pruned()
    }

    /// `(I : g)` for a single nonzero polynomial.
    pub fn colon_elem(&self, g: &MultiPoly) -> PolyIdeal {
        assert!(!g.is_zero(), "colon by zero");
        if self.contains(g) {
            return PolyIdeal::unit(self.nvars);
        }
        if g.is_constant() {
            return self.pruned();
        }
        // (cI' : y) = (c/e)·(I' : y/e) with e = gcd(c, y)
        if let Some((c, rest)) = self.split_common_factor() {
            let e = poly_gcd(&c, g);
            let inner = rest.colon_elem(&g.div_exact(&e).expect("gcd divides"));
            return inner.scaled(&c.div_exact(&e).expect("gcd divides")).pruned();
        }
        if self.is_monomial() && g.is_monomial() {
            let y = g.terms().next().unwrap().0.clone();
            let gens = self
                .gens
                .iter()
                .map(|m| {
                    let m = m.terms().next().unwrap().0;
                    MultiPoly::term(self.nvars, m.div(&m.gcd(&y)), num_traits::One::one())
                })
                .collect();
            return PolyIdeal { nvars: self.nvars, gens }.pruned();
        }
        let principal = PolyIdeal {
            nvars: self.nvars,
            gens: vec![g.clone()],
        };
        let meet = self.intersect(&principal);
        let gens: Vec<MultiPoly> = meet
            .gens
            .iter()
            .map(|h| h.div_exact(g).expect("element of (g) is divisible by g"))
            .collect();
        PolyIdeal {
            nvars: self.nvars,
            gens,
        }
        .pruned()
    }

    /// `(I : J) = ∩ (I : g)` over the generators `g` of `J`.
    pub fn colon(&self, other: &PolyIdeal) -> PolyIdeal {
        let mut acc: Option<PolyIdeal> = None;
        for g in &other.gens {
            let c = self.colon_elem(g);
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c),
            });
        }
        acc.expect("nonzero ideal has a generator")
    }

    /// `(I : g^∞)` as the stabilized chain `I ⊆ (I:g) ⊆ (I:g^2) ⊆ ...`.
    pub fn saturate(&self, g: &MultiPoly) -> PolyIdeal {
        let mut cur = self.reduced();
        loop {
            let next = cur.colon_elem(g);
            if next.same_ideal(&cur) {
                return cur;
            }
            cur = next;
        }
    }

    pub fn sorted(mut self) -> PolyIdeal {
        self.gens
            .sort_by(|a, b| cmp_polys(b, a, MonomialOrder::DegRevLex));
        self
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> IdealDisplay<'a> {
        IdealDisplay { ideal: self, names }
    }
}

pub struct IdealDisplay<'a> {
    ideal: &'a PolyIdeal,
    names: &'a [String],
}

impl fmt::Display for IdealDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.ideal.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display_with(self.names))?;
        }
        write!(f, ")")
    }
}

/// Content ideal of `f` viewed as a polynomial in variable `var` with
/// coefficients in the remaining variables.
pub fn content_ideal(f: &MultiPoly, var: usize) -> Result<PolyIdeal, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    PolyIdeal::new(f.coefficients_in(var))
}

/// Monic generators without repeats, dropping any generator divisible by a
/// smaller kept one. Generates the same ideal; no Gröbner basis needed.
pub fn prune_generators(gens: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut monic: Vec<MultiPoly> = gens.iter().map(|g| g.monic(MonomialOrder::DegRevLex)).collect();
    monic.sort_by(|a, b| cmp_polys(a, b, MonomialOrder::DegRevLex));
    monic.dedup();
    let mut kept: Vec<MultiPoly> = Vec::new();
    for g in monic {
        if !kept.iter().any(|h| g.div_exact(h).is_some()) {
            kept.push(g);
        }
    }
    kept.reverse();
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn ideal(g: Vec<MultiPoly>) -> PolyIdeal {
        PolyIdeal::new(g).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(ideal(vec![x()]).contains(&MultiPoly::zero(2)));
        assert!(ideal(vec![x().pow(2)]).contains(&x().pow(3)));
        assert!(!ideal(vec![x().pow(2), y().pow(2)]).contains(&(&x() * &y())));
    }

    #[test]
    fn combine_examples() {
        let s = ideal(vec![x()]).sum(&ideal(vec![y()]));
        assert!(s.same_ideal(&ideal(vec![x(), y()])));
        let p = ideal(vec![x()]).product(&ideal(vec![y()]));
        assert!(p.same_ideal(&ideal(vec![&x() * &y()])));
        let m = ideal(vec![x(), y()]);
        let sq = m.product(&m);
        assert!(sq.same_ideal(&ideal(vec![x().pow(2), &x() * &y(), y().pow(2)])));
    }

    #[test]
    fn intersection_examples() {
        let i = ideal(vec![x()]).intersect(&ideal(vec![x(), y()]));
        assert!(i.same_ideal(&ideal(vec![x()])));
        let j = ideal(vec![x()]).intersect(&ideal(vec![y()]));
        assert!(j.same_ideal(&ideal(vec![&x() * &y()])));
        let k = ideal(vec![x(), y().pow(2)]);
        assert!(k.intersect(&k).same_ideal(&k));
    }

    #[test]
    fn colon_examples() {
        let i = ideal(vec![x().pow(2), &x() * &y()]);
        assert!(i.colon(&PolyIdeal::unit(2)).same_ideal(&i));
        assert!(i.colon(&ideal(vec![x()])).same_ideal(&ideal(vec![x(), y()])));
        assert!(ideal(vec![x()]).colon(&ideal(vec![y()])).same_ideal(&ideal(vec![x()])));
    }

    #[test]
    fn saturation_examples() {
        let xy = ideal(vec![&x() * &y()]);
        assert!(xy.saturate(&y()).same_ideal(&ideal(vec![x()])));
        assert!(xy.saturate(&MultiPoly::one(2)).same_ideal(&xy));
        let i = ideal(vec![x().pow(2), &x() * &y()]);
        assert!(i.saturate(&y()).same_ideal(&ideal(vec![x()])));
    }

    #[test]
    fn content_ideal_reads_coefficients() {
        // f = X0^2 + X1^2 * T in Q[X0, X1, T]
        let v = |i| MultiPoly::var(3, i);
        let f = &v(0).pow(2) + &(&v(1).pow(2) * &v(2));
        let c = content_ideal(&f, 2).unwrap();
        assert!(c.same_ideal(&ideal(vec![x().pow(2), y().pow(2)])));
        assert_eq!(content_ideal(&MultiPoly::zero(3), 2), Err(ExactError::ZeroPolynomial));
    }
}
