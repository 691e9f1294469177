use crate::domains::{localize_contract, Domain, DomainKind, FractionalIdeal, PrimeIdeal};
use crate::exact::{newton_closure_monomial, PolyIdeal};

use super::{
    Budget, Closure, ClosureResult, Grade, OpKind, Overring, Result, SemistarError, SemistarOp, Witness,
};

pub(super) fn apply(op: &SemistarOp, d: &Domain, e: &FractionalIdeal) -> Result<ClosureResult> {
    let e = &e.normalize(d);
    let exact = |c: Closure| Ok(ClosureResult::exact(c));
    match &op.kind {
        OpKind::Identity | OpKind::Extension(Overring::Base) => exact(Closure::Presented(e.clone())),
        OpKind::Divisorial | OpKind::T => exact(Closure::Presented(e.dual(d).dual(d))),
        OpKind::B => exact(Closure::Presented(b_closure(d, e)?)),
        OpKind::Ex53 => exact(Closure::Presented(ex53_closure(d, e))),
        OpKind::Spectral(ps) | OpKind::Tilde { mset: ps, .. } => exact(spectral(d, e, ps)?),
        OpKind::Extension(Overring::Localization(p)) => exact(Closure::Local(Box::new(localize_contract(d, e, p)?))),
        OpKind::Extension(Overring::Field) | OpKind::Trivial => exact(Closure::Whole),
        OpKind::ValuationFamily(vals) => exact(Closure::Valuations {
            ideal: e.clone(),
            vals: vals.clone(),
        }),
        OpKind::Finite(base) => base.apply(d, e),
        OpKind::W(base) => exact(Closure::ColonUnit {
            star: base.clone(),
            ideal: e.clone(),
        }),
        OpKind::A { base, budget } => a_lower(d, base, budget, e),
        OpKind::Restricted { base, overring } => restricted(d, base, overring, e),
    }
}

fn spectral(d: &Domain, e: &FractionalIdeal, ps: &[PrimeIdeal]) -> Result<Closure> {
    let parts = ps
        .iter()
        .map(|p| Ok(Closure::Local(Box::new(localize_contract(d, e, p)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Closure::Intersection(parts))
}

/// `b` on `E = (g/e)·M`: the identity when `M = D`, the Newton closure when
/// `M` is monomial.
fn b_closure(d: &Domain, e: &FractionalIdeal) -> Result<FractionalIdeal> {
    if let DomainKind::Integers { .. } = d.kind() {
        return Ok(e.clone());
    }
    let g = d.gcd_list(&e.gens).expect("gcd backend");
    let m: Vec<_> = e.gens.iter().map(|x| d.div_in_d(x, &g).expect("gcd divides")).collect();
    if d.ideal_is_unit(&m) {
        return Ok(e.clone());
    }
    let m = d.ideal_reduce_gb(&m);
    let ideal = PolyIdeal::new(m).map_err(crate::domains::DomainError::from)?;
    let closed = newton_closure_monomial(&ideal).map_err(|_| {
        SemistarError::Unsupported(format!(
            "b closure of {} (numerator is neither principal nor monomial)",
            e.show(d)
        ))
    })?;
    let gens = d.ideal_scale(closed.generators(), &g);
    Ok(FractionalIdeal::new(d, gens, e.den.clone())?.normalize(d))
}

/// `fD ↦ fD`; otherwise `J = f·I ↦ f·N` with `f` a gcd of the generators.
/// A fractional `E = (1/e)J` maps to `(1/e)J^★`.
fn ex53_closure(d: &Domain, e: &FractionalIdeal) -> FractionalIdeal {
    let f = d.gcd_list(&e.gens).expect("gcd backend");
    let rest: Vec<_> = e.gens.iter().map(|x| d.div_in_d(x, &f).expect("gcd divides")).collect();
    if d.ideal_is_unit(&rest) {
        return e.clone();
    }
    let n: Vec<_> = (0..d.nvars()).map(|i| d.var(i)).collect();
    FractionalIdeal::new(d, d.ideal_scale(&n, &f), e.den.clone())
        .expect("nonzero")
        .normalize(d)
}

/// Multisets of at most `depth` factors from `factors`, as products.
pub(crate) fn pool(d: &Domain, factors: &[FractionalIdeal], depth: u32) -> Vec<(String, FractionalIdeal)> {
    let mut out = vec![("D".to_string(), FractionalIdeal::unit(d))];
    let mut frontier: Vec<(usize, String, FractionalIdeal)> = vec![(0, String::new(), FractionalIdeal::unit(d))];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (start, label, h) in &frontier {
            for (i, f) in factors.iter().enumerate().skip(*start) {
                let l = if label.is_empty() {
                    f.show(d)
                } else {
                    format!("{label}·{}", f.show(d))
                };
                let p = h.product(d, f);
                out.push((l.clone(), p.clone()));
                next.push((i, l, p));
            }
        }
        frontier = next;
    }
    out
}

/// Lower bound for `F^{★_a} = ∪ ((FH)^★ : H^★)` over a pool of `H`.
fn a_lower(d: &Domain, base: &SemistarOp, budget: &Budget, f: &FractionalIdeal) -> Result<ClosureResult> {
    let mut factors = vec![FractionalIdeal::integral(d, f.gens.clone())?.normalize(d)];
    if let Some(m) = PrimeIdeal::center(d) {
        factors.push(FractionalIdeal::integral(d, m.gens)?);
    }
    for a in &budget.aux {
        if !factors.contains(a) {
            factors.push(a.clone());
        }
    }
    let mut sum = f.clone();
    let mut oracles = Vec::new();
    let mut witnesses = Vec::new();
    for (label, h) in pool(d, &factors, budget.depth) {
        let c = base.apply(d, &f.product(d, &h))?;
        match c.closure {
            Closure::Whole => {
                witnesses.push(Witness {
                    label: format!("H = {label}: (FH)^★ = K"),
                    h: Some(h),
                    gained: vec![],
                });
                return Ok(ClosureResult {
                    closure: Closure::Whole,
                    grade: Grade::Exact,
                    witnesses,
                });
            }
            Closure::Presented(c) => {
                let contribution = c.colon(d, &h);
                let gained: Vec<_> = contribution
                    .elements(d)
                    .into_iter()
                    .filter(|g| !sum.contains(d, g))
                    .collect();
                if !gained.is_empty() {
                    sum = sum.sum(d, &contribution);
                    witnesses.push(Witness {
                        label: format!("H = {label}"),
                        h: Some(h),
                        gained,
                    });
                }
            }
            other => oracles.push(Closure::Colon {
                inner: Box::new(other),
                by: h,
            }),
        }
    }
    let mut grade = Grade::LowerBound;
    if oracles.is_empty() {
        for (name, upper) in upper_bounds(d, base, f)? {
            if sum.same(d, &upper) {
                grade = Grade::Exact;
                witnesses.push(Witness {
                    label: format!("pinned by the upper bound {name}"),
                    h: None,
                    gained: vec![],
                });
                break;
            }
        }
    }
    let closure = if oracles.is_empty() {
        Closure::Presented(sum)
    } else {
        oracles.insert(0, Closure::Presented(sum));
        Closure::Union(oracles)
    };
    Ok(ClosureResult {
        closure,
        grade,
        witnesses,
    })
}

/// Presented operations known to dominate `★_a`:
/// `t` for finite-type star operations on integrally closed backends, and
/// `b` for `d` (since `d_a ≤ b_a = b`).
pub(super) fn upper_bounds(d: &Domain, base: &SemistarOp, f: &FractionalIdeal) -> Result<Vec<(&'static str, FractionalIdeal)>> {
    let mut out = Vec::new();
    let integrally_closed = d.has_gcd();
    if integrally_closed && base.flags.finite_type && base.is_star_on_d(d) {
        out.push(("t", f.dual(d).dual(d)));
    }
    if base.kind == OpKind::Identity {
        if let Ok(b) = SemistarOp::b(d) {
            if let Ok(c) = b.apply(d, f) {
                out.push(("b", c.presentation().cloned().expect("b is presented")));
            }
        }
    }
    Ok(out)
}

fn restricted(d: &Domain, base: &SemistarOp, t: &Overring, e: &FractionalIdeal) -> Result<ClosureResult> {
    let p = match t {
        Overring::Base => return base.apply(d, e),
        Overring::Field => return Ok(ClosureResult::exact(Closure::Whole)),
        Overring::Localization(p) => p,
    };
    if PrimeIdeal::center(d).is_some_and(|m| m.is_subset(d, p)) {
        // D_P = D
        return base.apply(d, e);
    }
    let unsupported = || {
        Err(SemistarError::Unsupported(format!(
            "restriction of {} to D_P for P = {}",
            base.name(d),
            p.show(d)
        )))
    };
    match &base.kind {
        // (D : D_P) = 0 when D_P ≠ D, so every ideal of D_P has dual 0
        OpKind::Divisorial => Ok(ClosureResult::exact(Closure::Whole)),
        OpKind::Extension(Overring::Localization(q)) if q.is_subset(d, p) => {
            Ok(ClosureResult::exact(Closure::Local(Box::new(localize_contract(d, e, q)?))))
        }
        // D_P ⊆ D_Q for Q ⊆ P, so the closure is already a D_P-module
        OpKind::Spectral(qs) | OpKind::Tilde { mset: qs, .. } if qs.iter().all(|q| q.is_subset(d, p)) => base.apply(d, e),
        _ if base.flags.finite_type => {
            // (E·D_P)^★ = E^★·D_P for finite-type ★
            let c = base.apply(d, e)?;
            match c.closure {
                Closure::Whole => Ok(c),
                Closure::Presented(ref s) => Ok(ClosureResult {
                    closure: Closure::Local(Box::new(localize_contract(d, s, p)?)),
                    grade: c.grade,
                    witnesses: c.witnesses,
                }),
                _ => unsupported(),
            }
        }
        _ => unsupported(),
    }
}
