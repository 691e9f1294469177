//! Sampled property checks: the semistar axioms, stability, e.a.b.,
//! comparison of two operations, and the ★-valuation-overring test.

use crate::domains::{Domain, FractionalIdeal, KElem, ValuationSpec};

use super::sample::{seeded_map, Sampler};
use super::{Closure, ClosureResult, Grade, Result, SemistarError, SemistarOp};

/// Test elements for a closure `E^★`: generators of `E` and of a presentation
/// of `E^★`, their quotients by atoms, and a few random elements.
pub fn probes(d: &Domain, e: &FractionalIdeal, c: &ClosureResult, s: &mut Sampler) -> Vec<KElem> {
    let mut base = e.elements(d);
    if let Some(p) = c.presentation() {
        base.extend(p.elements(d));
    }
    let mut out = base.clone();
    for g in &base {
        for a in d.atoms() {
            let a = d.k_from_d(&a);
            out.push(d.k_div(g, &a).expect("nonzero atom"));
            out.push(d.k_mul(g, &a));
        }
    }
    for _ in 0..4 {
        out.push(s.element());
    }
    let mut seen: Vec<KElem> = Vec::new();
    for x in out {
        if !seen.contains(&x) {
            seen.push(x);
        }
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub op: String,
    pub samples: usize,
    /// Samples whose closure the operation cannot compute.
    pub skipped: usize,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }
}

const AXIOMS: [&str; 5] = ["scaling", "extensive", "monotone", "idempotent", "stable"];

/// Closure `A^★ ⊆ B^★` tested on the presentation of `A^★` when there is one,
/// otherwise on probes lying in `A^★`. Returns an offending element.
fn closure_escape(d: &Domain, a: &ClosureResult, b: &ClosureResult, probes: &[KElem]) -> Result<Option<KElem>> {
    let test: Vec<KElem> = match a.presentation() {
        Some(p) => p.elements(d),
        None => probes.to_vec(),
    };
    for y in test {
        if a.contains(d, &y)? && !b.contains(d, &y)? {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

fn one_sample(d: &Domain, star: &SemistarOp, s: &mut Sampler) -> Result<[Option<Option<String>>; 5]> {
    let e = s.ideal();
    let z = s.element();
    let g = s.ideal();
    let ce = star.apply(d, &e)?;
    let pr = probes(d, &e, &ce, s);
    let show = |x: &KElem| d.show_k(x);
    let mut out: [Option<Option<String>>; 5] = Default::default();

    // (zE)^★ = z·E^★, pointwise on probes
    let ze = e.scale(d, &z)?;
    let cze = star.apply(d, &ze)?;
    let mut bad = None;
    for y in &pr {
        let zy = d.k_mul(&z, y);
        let (lhs, rhs) = (ce.contains(d, y)?, cze.contains(d, &zy)?);
        let lower = ce.grade == Grade::LowerBound || cze.grade == Grade::LowerBound;
        if lhs != rhs && !lower {
            bad = Some(format!("E = {}, z = {}: {} ∈ E^★ is {lhs}, z·it ∈ (zE)^★ is {rhs}", e.show(d), show(&z), show(y)));
            break;
        }
    }
    out[0] = Some(bad);

    // E ⊆ E^★
    let escaped = e.elements(d).into_iter().find(|x| !ce.contains(d, x).unwrap_or(false));
    out[1] = Some(escaped.map(|x| format!("E = {}: generator {} not in E^★", e.show(d), show(&x))));

    // E ⊆ E + G ⇒ E^★ ⊆ (E + G)^★
    let eg = e.sum(d, &g);
    let ceg = star.apply(d, &eg)?;
    out[2] = Some(closure_escape(d, &ce, &ceg, &pr)?.map(|y| {
        format!("E = {}, F = {}: {} ∈ E^★ \\ F^★", e.show(d), eg.show(d), show(&y))
    }));

    // (E^★)^★ = E^★, or with an element y ∈ E^★: (E + (y))^★ = E^★
    let idem = match ce.presentation() {
        Some(p) => {
            let cc = star.apply(d, p)?;
            let grow = closure_escape(d, &cc, &ce, &pr)?;
            if ce.grade == Grade::LowerBound {
                // only E^★ ⊆ (E^★)^★ is required of a lower bound
                closure_escape(d, &ce, &cc, &pr)?
            } else {
                grow
            }
        }
        None => {
            let mut found = None;
            for y in pr.iter().filter(|y| ce.contains(d, y).unwrap_or(false)).take(3) {
                let ey = e.sum(d, &FractionalIdeal::principal(d, y)?);
                let cey = star.apply(d, &ey)?;
                if let Some(w) = closure_escape(d, &cey, &ce, &pr)? {
                    found = Some(w);
                    break;
                }
            }
            found
        }
    };
    out[3] = Some(idem.map(|y| format!("E = {}: {} ∈ (E^★)^★ \\ E^★", e.show(d), show(&y))));

    // (E ∩ G)^★ = E^★ ∩ G^★
    if star.flags.stable_claimed {
        let cg = star.apply(d, &g)?;
        let cig = star.apply(d, &e.intersect(d, &g))?;
        let mut bad = None;
        let mut test = pr.clone();
        if let Some(p) = cig.presentation() {
            test.extend(p.elements(d));
        }
        for y in &test {
            let lhs = cig.contains(d, y)?;
            let rhs = ce.contains(d, y)? && cg.contains(d, y)?;
            if lhs != rhs {
                bad = Some(format!("E = {}, F = {}: {} distinguishes (E∩F)^★ from E^★∩F^★", e.show(d), g.show(d), show(y)));
                break;
            }
        }
        out[4] = Some(bad);
    }
    Ok(out)
}

/// Checks (★1)–(★3), and stability when claimed, on `n` seeded samples.
pub fn check_axioms(d: &Domain, star: &SemistarOp, seed: u64, n: usize) -> AxiomReport {
    check_axioms_with(d, star, seed, n, None)
}

pub fn check_axioms_with(
    d: &Domain,
    star: &SemistarOp,
    seed: u64,
    n: usize,
    atoms: Option<&[crate::exact::MultiPoly]>,
) -> AxiomReport {
    let runs = seeded_map(d, seed, n, atoms, |_, s| one_sample(d, star, s));
    let mut skipped = 0;
    let mut results: Vec<AxiomResult> = AXIOMS
        .iter()
        .map(|a| AxiomResult {
            axiom: a,
            checked: 0,
            counterexample: None,
        })
        .collect();
    for r in runs {
        match r {
            Ok(slots) => {
                for (res, slot) in results.iter_mut().zip(slots) {
                    if let Some(outcome) = slot {
                        res.checked += 1;
                        if res.counterexample.is_none() {
                            res.counterexample = outcome;
                        }
                    }
                }
            }
            Err(SemistarError::Unsupported(_)) => skipped += 1,
            Err(e) => {
                results[0].counterexample.get_or_insert(format!("error: {e}"));
            }
        }
    }
    results.retain(|r| r.checked > 0 || r.counterexample.is_some());
    AxiomReport {
        op: star.name(d),
        samples: n,
        skipped,
        results,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EabReport {
    pub checked: usize,
    /// Triples where `(EF)^★ ⊆ (EG)^★` holds.
    pub applicable: usize,
    pub violations: Vec<String>,
}

/// `(EF)^★ ⊆ (EG)^★ ⇒ F^★ ⊆ G^★` on the given triples.
pub fn check_eab(d: &Domain, star: &SemistarOp, triples: &[(FractionalIdeal, FractionalIdeal, FractionalIdeal)]) -> Result<EabReport> {
    let mut rep = EabReport {
        checked: 0,
        applicable: 0,
        violations: vec![],
    };
    for (e, f, g) in triples {
        rep.checked += 1;
        if star.closure_subset(d, &e.product(d, f), &e.product(d, g))? {
            rep.applicable += 1;
            if !star.closure_subset(d, f, g)? {
                rep.violations.push(format!("E = {}, F = {}, G = {}", e.show(d), f.show(d), g.show(d)));
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpOrder {
    Equal,
    Less,
    Greater,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderEvidence {
    pub order: OpOrder,
    /// Elements `(E, z)` with `z ∈ E^{★2} \ E^{★1}` (strictness of `≤`).
    pub above: Vec<(String, String)>,
    /// Elements with `z ∈ E^{★1} \ E^{★2}`.
    pub below: Vec<(String, String)>,
    /// All inclusions were decided on presentations.
    pub exact: bool,
}

/// Orders `★1` and `★2` on the sample ideals.
pub fn compare_ops(d: &Domain, s1: &SemistarOp, s2: &SemistarOp, samples: &[FractionalIdeal], seed: u64) -> Result<OrderEvidence> {
    let mut ev = OrderEvidence {
        order: OpOrder::Equal,
        above: vec![],
        below: vec![],
        exact: true,
    };
    for (i, e) in samples.iter().enumerate() {
        let mut s = Sampler::new(d, seed, i as u64);
        let c1 = s1.apply(d, e)?;
        let c2 = s2.apply(d, e)?;
        let mut pr = probes(d, e, &c1, &mut s);
        if let Some(p) = c2.presentation() {
            pr.extend(p.elements(d));
        }
        let presented = c1.presentation().is_some() && c2.presentation().is_some();
        let exactness = presented && c1.grade == Grade::Exact && c2.grade == Grade::Exact;
        ev.exact &= exactness;
        if let Some(y) = closure_escape(d, &c1, &c2, &pr)? {
            ev.below.push((e.show(d), d.show_k(&y)));
        }
        if let Some(y) = closure_escape(d, &c2, &c1, &pr)? {
            ev.above.push((e.show(d), d.show_k(&y)));
        }
    }
    ev.order = match (ev.below.is_empty(), ev.above.is_empty()) {
        (true, true) => OpOrder::Equal,
        (true, false) => OpOrder::Less,
        (false, true) => OpOrder::Greater,
        (false, false) => OpOrder::Incomparable,
    };
    Ok(ev)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverringVerdict {
    pub holds: bool,
    /// `(F, z)` with `z ∈ F^★` and `v(z) < min v(F)`.
    pub witness: Option<(String, String)>,
    /// `true` verdicts hold on the samples only.
    pub relative_to_samples: bool,
}

/// `F^★ ⊆ F·V` on the sample ideals. Probes include generators of `F` divided
/// by generators of the center of `V`.
pub fn is_star_valuation_overring(d: &Domain, v: &ValuationSpec, star: &SemistarOp, fsamples: &[FractionalIdeal]) -> Result<OverringVerdict> {
    let centers: Vec<KElem> = v.center_gens(d).iter().map(|c| d.k_from_d(c)).collect();
    for f in fsamples {
        let c = star.apply(d, f)?;
        let gamma = v.min_value(d, f);
        let mut test = match c.presentation() {
            Some(p) => p.elements(d),
            None => vec![],
        };
        if matches!(c.closure, Closure::Whole) {
            // F^★ = K is never inside F·V
            let g = &f.elements(d)[0];
            let witness = d.k_div(g, &centers[0])?;
            return Ok(OverringVerdict {
                holds: false,
                witness: Some((f.show(d), d.show_k(&witness))),
                relative_to_samples: false,
            });
        }
        for g in f.elements(d) {
            test.push(g.clone());
            for c in &centers {
                test.push(d.k_div(&g, c)?);
                for c2 in &centers {
                    test.push(d.k_div(&d.k_div(&g, c)?, c2)?);
                }
            }
        }
        for z in test {
            if v.value(d, &z) < gamma && c.contains(d, &z)? {
                return Ok(OverringVerdict {
                    holds: false,
                    witness: Some((f.show(d), d.show_k(&z))),
                    relative_to_samples: false,
                });
            }
        }
    }
    Ok(OverringVerdict {
        holds: true,
        witness: None,
        relative_to_samples: true,
    })
}
