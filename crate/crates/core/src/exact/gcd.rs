//! Polynomial gcd over Q by the recursive primitive remainder sequence.
//! No Gröbner basis is involved.

use super::order::MonomialOrder;
use super::poly::{Monomial, MultiPoly};

/// Greatest common divisor of two polynomials, monic under degrevlex.
/// `gcd(0, 0)` is `0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic(MonomialOrder::DegRevLex);
    }
    if b.is_zero() {
        return a.monic(MonomialOrder::DegRevLex);
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let e = m.terms().next().unwrap().0;
        let mc = other.monomial_content();
        let g = e.gcd(&mc);
        return MultiPoly::term(n, g, num_traits::One::one());
    }
    // strip common monomial factors first so the elimination stays small
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let core = if a1.is_constant() || b1.is_constant() {
        MultiPoly::one(n)
    } else if a1.div_exact(&b1).is_some() {
        b1.clone()
    } else if b1.div_exact(&a1).is_some() {
        a1.clone()
    } else {
        prs_gcd(&a1, &b1)
    };
    (&core * &MultiPoly::term(n, mg, num_traits::One::one())).monic(MonomialOrder::DegRevLex)
}

/// Highest variable occurring in `a` or `b`.
fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// Coefficients of `p` in `var`, each re-embedded (free of `var`).
fn coeffs_lifted(p: &MultiPoly, var: usize) -> Vec<MultiPoly> {
    p.coefficients_in(var)
        .into_iter()
        .map(|c| MultiPoly::from_coefficients_in(var, &[c]))
        .collect()
}

/// Gcd of the coefficients of `p` in `var`; free of `var`.
fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    coeffs_lifted(p, var)
        .into_iter()
        .filter(|c| !c.is_zero())
        .fold(MultiPoly::zero(p.nvars()), |g, c| if g.is_constant() && !g.is_zero() { g } else { prs_gcd(&g, &c) })
}

/// `lc^k · a mod b` in `var`, the pseudo-remainder.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let n = a.nvars();
    let db = b.degree_in(var);
    let lb = coeffs_lifted(b, var).pop().expect("nonzero divisor");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = coeffs_lifted(&r, var).pop().unwrap();
        let mut e = vec![0; n];
        e[var] = dr - db;
        let shift = MultiPoly::term(n, Monomial(e), num_traits::One::one());
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Gcd of arbitrary polynomials, up to a rational unit. Recurses on the
/// highest variable: contents are gcds in fewer variables, and the
/// primitive parts run a pseudo-remainder sequence kept primitive.
fn prs_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let Some(var) = main_var(a, b) else {
        return MultiPoly::one(n);
    };
    let (ca, cb) = (content_in(a, var), content_in(b, var));
    let c = prs_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(var) == 0 {
            // a nonzero primitive remainder free of var: the parts are coprime
            return c;
        }
        let r = pseudo_rem(&p, &q, var);
        p = q;
        q = if r.is_zero() { r } else { r.div_exact(&content_in(&r, var)).expect("content divides") };
    }
    &c * &p
}

/// Gcd of a list; `None` for an empty or all-zero list.
pub fn poly_gcd_list(polys: &[MultiPoly]) -> Option<MultiPoly> {
    let mut it = polys.iter().filter(|p| !p.is_zero());
    let first = it.next()?.monic(MonomialOrder::DegRevLex);
    Some(it.fold(first, |g, p| if g.is_constant() { g } else { poly_gcd(&g, p) }))
}

/// Monomial gcd helper exposed for the monomial fast paths of callers.
pub fn monomial_gcd(ms: &[Monomial]) -> Option<Monomial> {
    let mut it = ms.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |g, m| g.gcd(m)))
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

    #[test]
    fn gcd_of_products() {
        let a = &(&x() + &y()) * &(&x() - &y());
        let b = &(&x() + &y()) * &x();
        assert_eq!(poly_gcd(&a, &b), &x() + &y());
    }

    #[test]
    fn gcd_with_monomials() {
        let a = &x().pow(2) * &y();
        let b = &(&x().pow(3) * &y()) + &(&x() * &y().pow(2));
        assert_eq!(poly_gcd(&a, &b), &x() * &y());
        assert_eq!(poly_gcd(&x(), &y()), MultiPoly::one(2));
    }

    #[test]
    fn gcd_list_of_ideal_generators() {
        let gens = vec![x().pow(2), &x() * &y()];
        assert_eq!(poly_gcd_list(&gens).unwrap(), x());
        let coprime = vec![&x() + &MultiPoly::one(2), &x() * &y()];
        assert_eq!(poly_gcd_list(&coprime).unwrap(), MultiPoly::one(2));
    }

    #[test]
    fn gcd_with_contents_in_three_variables() {
        let z = MultiPoly::var(3, 2);
        let (x3, y3) = (MultiPoly::var(3, 0), MultiPoly::var(3, 1));
        let one = MultiPoly::one(3);
        // common factor (x + y)·(z·x + 1); the cofactors share a z-content x
        let common = &(&x3 + &y3) * &(&(&z * &x3) + &one);
        let a = &common * &(&(&x3 * &z) + &x3);
        let b = &common * &(&(&x3 * &z.pow(2)) - &(&x3 * &y3));
        let g = poly_gcd(&a, &b);
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
        let expected = (&common * &x3).monic(MonomialOrder::DegRevLex);
        assert_eq!(g, expected);
    }

    #[test]
    fn coprime_dense_inputs() {
        let one = MultiPoly::one(2);
        let a = &(&x().pow(3) + &y().pow(2)) + &one;
        let b = &(&(&x() * &y()) - &y().pow(3)) + &x();
        assert_eq!(poly_gcd(&a, &b), one);
        let c = &(&x() - &y()) + &one;
        assert_eq!(poly_gcd(&(&a * &c), &(&b * &c.pow(2))), c.monic(MonomialOrder::DegRevLex));
    }
}
