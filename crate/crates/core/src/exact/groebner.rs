//! Buchberger's algorithm over Q with the Gebauer–Möller pair criteria.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, LazyLock, Mutex};

use num_traits::{One, Zero};

use super::order::MonomialOrder;
use super::poly::{Coeff, Monomial, MultiPoly};
use super::ExactError;

type Terms = Vec<(Monomial, Coeff)>;

const CACHE_LIMIT: usize = 40_000;

pub(crate) type BasisCache = HashMap<(Vec<MultiPoly>, MonomialOrder), Arc<Vec<MultiPoly>>>;

static CACHE: LazyLock<Mutex<BasisCache>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

static INSTANCES: AtomicU64 = AtomicU64::new(0);
static MAX_VARS: AtomicUsize = AtomicUsize::new(0);
static MAX_DEGREE: AtomicUsize = AtomicUsize::new(0);

/// Size envelope of the Gröbner instances computed so far in this process.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub instances: u64,
    pub max_vars: usize,
    pub max_input_degree: usize,
}

pub fn engine_stats() -> EngineStats {
    EngineStats {
        instances: INSTANCES.load(AtomicOrdering::Relaxed),
        max_vars: MAX_VARS.load(AtomicOrdering::Relaxed),
        max_input_degree: MAX_DEGREE.load(AtomicOrdering::Relaxed),
    }
}

/// Counts one engine run (over Q or over Z) in the shared statistics.
pub(crate) fn record_instance(gens: &[MultiPoly]) {
    INSTANCES.fetch_add(1, AtomicOrdering::Relaxed);
    let nvars = gens.first().map_or(0, |g| g.nvars());
    MAX_VARS.fetch_max(nvars, AtomicOrdering::Relaxed);
    let deg = gens.iter().map(|g| g.total_degree() as usize).max().unwrap_or(0);
    MAX_DEGREE.fetch_max(deg, AtomicOrdering::Relaxed);
}

fn leading(t: &Terms) -> &(Monomial, Coeff) {
    &t[0]
}

/// `p - c * m * q`, all term lists sorted descending.
fn sub_scaled(p: &[(Monomial, Coeff)], c: &Coeff, m: &Monomial, q: &Terms, order: MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let mut i = 0;
    let mut j = 0;
    while i < p.len() || j < q.len() {
        if j == q.len() {
            out.extend_from_slice(&p[i..]);
            break;
        }
        let qm = q[j].0.mul(m);
        if i == p.len() {
            out.push((qm, -(c * &q[j].1)));
            j += 1;
            continue;
        }
        match order.cmp(&p[i].0 .0, &qm.0) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((qm, -(c * &q[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &p[i].1 - c * &q[j].1;
                if !v.is_zero() {
                    out.push((qm, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn make_monic(mut t: Terms) -> Terms {
    if let Some((_, lc)) = t.first() {
        if !lc.is_one() {
            let inv = lc.recip();
            for (_, c) in t.iter_mut() {
                *c *= &inv;
            }
        }
    }
    t
}

/// Full reduction of `p` modulo `basis` (all monic, sorted).
fn reduce(p: Terms, basis: &[&Terms], order: MonomialOrder) -> Terms {
    let mut rest: Terms = Vec::new();
    let mut cur = p;
    let mut start = 0;
    while start < cur.len() {
        let (lm, lc) = (&cur[start].0, &cur[start].1);
        let divisor = basis.iter().find(|g| leading(g).0.divides(lm));
        match divisor {
            Some(g) => {
                let m = lm.div(&leading(g).0);
                let c = lc.clone();
                cur = sub_scaled(&cur[start..], &c, &m, g, order);
                start = 0;
            }
            None => {
                rest.push(cur[start].clone());
                start += 1;
            }
        }
    }
    rest
}

fn spoly(f: &Terms, g: &Terms, order: MonomialOrder) -> Terms {
    let lf = &leading(f).0;
    let lg = &leading(g).0;
    let l = lf.lcm(lg);
    let mf = l.div(lf);
    let mg = l.div(lg);
    // both monic: mf*f - mg*g
    let fm: Terms = f.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_scaled(&fm, &Coeff::one(), &mg, g, order)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn update(basis: &[Terms], active: &mut [bool], pairs: &mut Vec<Pair>, t: usize) {
    let h = leading(&basis[t]).0.clone();
    let mut c: Vec<usize> = (0..t).filter(|&i| active[i]).collect();
    let mut d: Vec<usize> = Vec::new();
    while let Some(g1) = c.pop() {
        let lg1 = &leading(&basis[g1]).0;
        let l1 = h.lcm(lg1);
        let keep = h.coprime(lg1)
            || !c.iter().chain(d.iter()).any(|&g2| h.lcm(&leading(&basis[g2]).0).divides(&l1));
        if keep {
            d.push(g1);
        }
    }
    let e: Vec<usize> = d
        .into_iter()
        .filter(|&g| !h.coprime(&leading(&basis[g]).0))
        .collect();
    pairs.retain(|p| {
        if !h.divides(&p.lcm) {
            return true;
        }
        let li = leading(&basis[p.i]).0.lcm(&h);
        let lj = leading(&basis[p.j]).0.lcm(&h);
        li == p.lcm || lj == p.lcm
    });
    for g in e {
        let lcm = leading(&basis[g]).0.lcm(&h);
        pairs.push(Pair { i: g, j: t, lcm });
    }
    for (i, a) in active.iter_mut().enumerate().take(t) {
        if *a && h.divides(&leading(&basis[i]).0) {
            *a = false;
        }
    }
    active[t] = true;
}

fn select_pair(pairs: &mut Vec<Pair>, order: MonomialOrder) -> Option<Pair> {
    if pairs.is_empty() {
        return None;
    }
    let mut best = 0;
    for k in 1..pairs.len() {
        let a = &pairs[k].lcm;
        let b = &pairs[best].lcm;
        let better = match a.degree().cmp(&b.degree()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => order.cmp(&a.0, &b.0) == Ordering::Less,
        };
        if better {
            best = k;
        }
    }
    Some(pairs.swap_remove(best))
}

fn compute(gens: &[MultiPoly], order: MonomialOrder) -> Vec<MultiPoly> {
    let nvars = gens[0].nvars();
    let mut basis: Vec<Terms> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Terms> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(g.sorted_terms(order)))
        .collect();
    inputs.sort_by(|a, b| order.cmp(&leading(a).0 .0, &leading(b).0 .0));

    for p in inputs {
        let act: Vec<&Terms> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
        let r = reduce(p, &act, order);
        if r.is_empty() {
            continue;
        }
        basis.push(make_monic(r));
        active.push(false);
        let t = basis.len() - 1;
        update(&basis, &mut active, &mut pairs, t);
    }

    while let Some(pair) = select_pair(&mut pairs, order) {
        let s = spoly(&basis[pair.i], &basis[pair.j], order);
        let act: Vec<&Terms> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(b, _)| b).collect();
        let r = reduce(s, &act, order);
        if r.is_empty() {
            continue;
        }
        basis.push(make_monic(r));
        active.push(false);
        let t = basis.len() - 1;
        update(&basis, &mut active, &mut pairs, t);
    }

    // interreduce the minimal basis
    let minimal: Vec<Terms> = basis
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(b, _)| b)
        .collect();
    let mut reduced: Vec<Terms> = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&Terms> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, b)| b)
            .collect();
        let head = g[0].clone();
        let tail = reduce(g[1..].to_vec(), &others, order);
        let mut t = vec![head];
        t.extend(tail);
        reduced.push(t);
    }
    reduced.sort_by(|a, b| order.cmp(&leading(b).0 .0, &leading(a).0 .0));
    reduced
        .into_iter()
        .map(|t| MultiPoly::from_terms(nvars, t))
        .collect()
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
///
/// Results are memoized per `(generators, order)`.
pub fn groebner_basis(gens: &[MultiPoly], order: MonomialOrder) -> Result<Vec<MultiPoly>, ExactError> {
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

    let gb = compute(gens, order);
    let mut cache = CACHE.lock().unwrap();
    if cache.len() > CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, Arc::new(gb.clone()));
    Ok(gb)
}

/// Normal form of `p` with respect to a Gröbner basis `gb` (as returned by
/// [`groebner_basis`] for the same order).
pub fn normal_form(p: &MultiPoly, gb: &[MultiPoly], order: MonomialOrder) -> MultiPoly {
    let basis: Vec<Terms> = gb.iter().map(|g| make_monic(g.sorted_terms(order))).collect();
    let refs: Vec<&Terms> = basis.iter().collect();
    let r = reduce(p.sorted_terms(order), &refs, order);
    MultiPoly::from_terms(p.nvars(), r)
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
    fn single_variable_is_already_reduced() {
        let gb = groebner_basis(&[x()], MonomialOrder::Lex).unwrap();
        assert_eq!(gb, vec![x()]);
    }

    #[test]
    fn linear_elimination() {
        let gb = groebner_basis(&[&x() + &y(), &x() - &y()], MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb, vec![x(), y()]);
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let gens = vec![x().pow(2), &x() * &y(), y().pow(2)];
        let gb = groebner_basis(&gens, MonomialOrder::DegRevLex).unwrap();
        assert_eq!(gb, gens);
    }

    #[test]
    fn zero_and_arity_errors() {
        assert_eq!(
            groebner_basis(&[MultiPoly::zero(2)], MonomialOrder::Lex),
            Err(ExactError::ZeroIdeal)
        );
        assert!(matches!(
            groebner_basis(&[x(), MultiPoly::var(3, 0)], MonomialOrder::Lex),
            Err(ExactError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_three_has_expected_leading_terms() {
        let v = |i| MultiPoly::var(3, i);
        let one = MultiPoly::one(3);
        let gens = vec![
            &(&v(0) + &v(1)) + &v(2),
            &(&(&v(0) * &v(1)) + &(&v(1) * &v(2))) + &(&v(2) * &v(0)),
            &(&(&v(0) * &v(1)) * &v(2)) - &one,
        ];
        let gb = groebner_basis(&gens, MonomialOrder::Lex).unwrap();
        // lex basis of cyclic-3: x + y + z, y^2 + y z + z^2, z^3 - 1
        assert_eq!(gb.len(), 3);
        assert_eq!(gb[2], &v(2).pow(3) - &one);
        for g in &gens {
            assert!(normal_form(g, &gb, MonomialOrder::Lex).is_zero());
        }
    }
}
