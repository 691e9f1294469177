//! Integral closure of monomial ideals through their Newton polyhedra.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ideal::PolyIdeal;
use super::poly::{Monomial, MultiPoly};
use super::ExactError;

type Q = BigRational;

/// Inequality `coeffs · x <= rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Ineq {
    coeffs: Vec<Q>,
    rhs: Q,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = lead.abs();
            for c in &mut self.coeffs {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

/// Exact feasibility of `{x : A x <= b}` by Fourier–Motzkin elimination.
fn feasible(mut system: Vec<Ineq>, nvars: usize) -> bool {
    for j in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in system {
            match ineq.coeffs[j].cmp(&Q::zero()) {
                std::cmp::Ordering::Greater => pos.push(ineq),
                std::cmp::Ordering::Less => neg.push(ineq),
                std::cmp::Ordering::Equal => rest.push(ineq),
            }
        }
        for p in &pos {
            for n in &neg {
                let a = p.coeffs[j].clone();
                let b = -n.coeffs[j].clone();
                let coeffs: Vec<Q> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                let rhs = &p.rhs * &b + &n.rhs * &a;
                let ineq = Ineq { coeffs, rhs }.normalized();
                if !rest.contains(&ineq) {
                    rest.push(ineq);
                }
            }
        }
        system = rest;
    }
    system.iter().all(|i| !i.rhs.is_negative())
}

/// Whether exponent vector `a` lies in conv(`gens`) + R_{>=0}^n.
pub fn in_newton_polyhedron(a: &[u32], gens: &[Vec<u32>]) -> bool {
    let n = a.len();
    let m = gens.len();
    if m == 0 {
        return false;
    }
    if gens.iter().any(|g| g.iter().zip(a).all(|(x, y)| x <= y)) {
        return true;
    }
    // lambda_m = 1 - sum(lambda_1..lambda_{m-1}); unknowns lambda_1..lambda_{m-1}
    let k = m - 1;
    let qi = |v: u32| Q::from_integer(v.into());
    let mut system = Vec::new();
    for i in 0..k {
        let mut c = vec![Q::zero(); k];
        c[i] = -Q::one();
        system.push(Ineq { coeffs: c, rhs: Q::zero() });
    }
    // lambda_m >= 0  <=>  sum lambda_i <= 1
    system.push(Ineq {
        coeffs: vec![Q::one(); k],
        rhs: Q::one(),
    });
    let last = &gens[m - 1];
    for coord in 0..n {
        // sum_i lambda_i (g_i - g_m)[coord] <= a[coord] - g_m[coord]
        let coeffs: Vec<Q> = (0..k)
            .map(|i| qi(gens[i][coord]) - qi(last[coord]))
            .collect();
        let rhs = qi(a[coord]) - qi(last[coord]);
        system.push(Ineq { coeffs, rhs });
    }
    feasible(system, k)
}

fn exponents_up_to(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=(max_deg - used) {
                let mut f = e.clone();
                f.push(k);
                next.push(f);
            }
        }
        out = next;
    }
    out
}

/// Integral closure of a monomial ideal: the monomials whose exponents lie in
/// the Newton polyhedron, listed up to the largest generator degree, then
/// minimized.
pub fn newton_closure_monomial(ideal: &PolyIdeal) -> Result<PolyIdeal, ExactError> {
    let n = ideal.nvars();
    let mut gens = Vec::new();
    for g in ideal.generators() {
        if !g.is_monomial() {
            return Err(ExactError::NotMonomial);
        }
        gens.push(g.terms().next().unwrap().0 .0.clone());
    }
    let max_deg = gens.iter().map(|g| g.iter().sum::<u32>()).max().unwrap_or(0);
    let members: Vec<Vec<u32>> = exponents_up_to(n, max_deg)
        .into_iter()
        .filter(|a| in_newton_polyhedron(a, &gens))
        .collect();
    let minimal: Vec<&Vec<u32>> = members
        .iter()
        .filter(|a| {
            !members
                .iter()
                .any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y))
        })
        .collect();
    let polys = minimal
        .into_iter()
        .map(|e| MultiPoly::term(n, Monomial(e.clone()), One::one()))
        .collect();
    Ok(PolyIdeal::new(polys)?.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> MultiPoly {
        MultiPoly::term(e.len(), Monomial(e.to_vec()), One::one())
    }

    #[test]
    fn principal_is_closed() {
        let i = PolyIdeal::new(vec![mono(&[1, 0])]).unwrap();
        assert!(newton_closure_monomial(&i).unwrap().same_ideal(&i));
    }

    #[test]
    fn squares_gain_the_mixed_term() {
        let i = PolyIdeal::new(vec![mono(&[2, 0]), mono(&[0, 2])]).unwrap();
        let c = newton_closure_monomial(&i).unwrap();
        let expect = PolyIdeal::new(vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]).unwrap();
        assert!(c.same_ideal(&expect));
    }

    #[test]
    fn cubes_fill_the_segment() {
        let i = PolyIdeal::new(vec![mono(&[3, 0]), mono(&[0, 3])]).unwrap();
        let c = newton_closure_monomial(&i).unwrap();
        let expect = PolyIdeal::new(vec![
            mono(&[3, 0]),
            mono(&[2, 1]),
            mono(&[1, 2]),
            mono(&[0, 3]),
        ])
        .unwrap();
        assert!(c.same_ideal(&expect));
    }

    #[test]
    fn rejects_non_monomial_input() {
        let i = PolyIdeal::new(vec![&mono(&[1, 0]) + &mono(&[0, 1])]).unwrap();
        assert_eq!(newton_closure_monomial(&i), Err(ExactError::NotMonomial));
    }

    #[test]
    fn polyhedron_membership_edges() {
        let gens = vec![vec![4, 0], vec![0, 2]];
        assert!(in_newton_polyhedron(&[2, 1], &gens));
        assert!(!in_newton_polyhedron(&[1, 1], &gens));
        assert!(in_newton_polyhedron(&[5, 0], &gens));
    }
}
