//! Quasi-★-ideals (`I^★ ∩ D = I`) and quasi-★-maximal primes among explicit
//! candidate sets.

use crate::domains::{Domain, DomainError, FractionalIdeal, KElem, PrimeIdeal};

use super::{Grade, OpKind, Overring, Result, SemistarError, SemistarOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiVerdict {
    pub quasi: bool,
    /// `false` when a `true` verdict rests on samples or on a lower bound.
    pub certain: bool,
    pub method: &'static str,
    /// An element of `(I^★ ∩ D) \ I`, when one was found.
    pub witness: Option<KElem>,
}

impl QuasiVerdict {
    fn exact(quasi: bool, method: &'static str) -> QuasiVerdict {
        QuasiVerdict {
            quasi,
            certain: true,
            method,
            witness: None,
        }
    }
}

/// `I^★ ∩ D = I` for a nonzero integral ideal `I`.
pub fn is_quasi_star_ideal(d: &Domain, i: &FractionalIdeal, star: &SemistarOp) -> Result<QuasiVerdict> {
    if !i.is_integral(d) {
        return Err(DomainError::NotContained.into());
    }
    let i = FractionalIdeal::integral(d, i.integral_gens(d)?)?.normalize(d);
    let c = star.apply(d, &i)?;
    if let Some(contracted) = c.closure.contraction(d) {
        let extra = contracted.elements(d).into_iter().find(|g| !i.contains(d, g));
        return Ok(QuasiVerdict {
            quasi: extra.is_none(),
            certain: extra.is_some() || c.grade == Grade::Exact,
            method: "contraction",
            witness: extra,
        });
    }
    // no presentation of I^★ ∩ D: search small elements of D outside I
    for x in probes_in_d(d, &i) {
        if c.contains(d, &x)? {
            return Ok(QuasiVerdict {
                quasi: false,
                certain: true,
                method: "sampled elements of D",
                witness: Some(x),
            });
        }
    }
    Ok(QuasiVerdict {
        quasi: true,
        certain: false,
        method: "sampled elements of D",
        witness: None,
    })
}

/// Elements of `D \ I` used when `I^★ ∩ D` has no presentation.
fn probes_in_d(d: &Domain, i: &FractionalIdeal) -> Vec<KElem> {
    let atoms = d.atoms();
    let mut out = vec![d.one()];
    out.extend(atoms.iter().cloned());
    for a in &atoms {
        for b in &atoms {
            out.push(d.mul(a, b));
        }
    }
    for g in &i.gens {
        for a in &atoms {
            if let Some(q) = d.div_in_d(g, a) {
                out.push(q);
            }
        }
    }
    let mut seen: Vec<KElem> = Vec::new();
    for x in out {
        let k = d.k_from_d(&x);
        if !i.contains(d, &k) && !seen.contains(&k) {
            seen.push(k);
        }
    }
    seen
}

/// Quasi-★ test for a prime, with closed forms for localizing operations.
pub fn is_quasi_star_prime(d: &Domain, p: &PrimeIdeal, star: &SemistarOp) -> Result<QuasiVerdict> {
    if !p.is_proper() {
        return Ok(QuasiVerdict::exact(false, "extends to D"));
    }
    match &star.kind {
        // P·D_Q ∩ D is P when P ⊆ Q and D otherwise
        OpKind::Spectral(qs) | OpKind::Tilde { mset: qs, .. } => {
            Ok(QuasiVerdict::exact(qs.iter().any(|q| p.is_subset(d, q)), "spectral rule"))
        }
        OpKind::Extension(Overring::Localization(q)) => Ok(QuasiVerdict::exact(p.is_subset(d, q), "spectral rule")),
        // x ∉ P gives (P :_D x) = P, so P is closed iff 1 ∉ P^★
        OpKind::W(base) => {
            let pi = FractionalIdeal::integral(d, p.gens.clone())?;
            let c = base.apply(d, &pi)?;
            let one = c.contains(d, &d.k_from_d(&d.one()))?;
            Ok(QuasiVerdict {
                quasi: !one,
                certain: !one || c.grade == Grade::Exact,
                method: "colon rule",
                witness: None,
            })
        }
        _ => is_quasi_star_ideal(d, &FractionalIdeal::integral(d, p.gens.clone())?, star),
    }
}

/// Quasi-★ primes and the maximal ones among them, relative to `candidates`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub quasi: Vec<PrimeIdeal>,
    pub maximal: Vec<PrimeIdeal>,
    pub verdicts: Vec<(PrimeIdeal, QuasiVerdict)>,
    pub certain: bool,
}

pub fn quasi_star_spectrum(d: &Domain, star: &SemistarOp, candidates: &[PrimeIdeal]) -> Result<Spectrum> {
    if candidates.is_empty() {
        return Err(SemistarError::Empty("candidate list"));
    }
    let mut verdicts = Vec::new();
    for p in candidates {
        verdicts.push((p.clone(), is_quasi_star_prime(d, p, star)?));
    }
    let quasi: Vec<PrimeIdeal> = verdicts.iter().filter(|(_, v)| v.quasi).map(|(p, _)| p.clone()).collect();
    let maximal = quasi
        .iter()
        .filter(|p| !quasi.iter().any(|q| p.is_subset(d, q) && !q.is_subset(d, p)))
        .cloned()
        .collect();
    let certain = verdicts.iter().all(|(_, v)| v.certain);
    Ok(Spectrum {
        quasi,
        maximal,
        verdicts,
        certain,
    })
}

/// Set equality of prime lists up to ideal equality.
pub fn same_primes(d: &Domain, a: &[PrimeIdeal], b: &[PrimeIdeal]) -> bool {
    let within = |x: &[PrimeIdeal], y: &[PrimeIdeal]| {
        x.iter().all(|p| y.iter().any(|q| p.is_subset(d, q) && q.is_subset(d, p)))
    };
    within(a, b) && within(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse_element, Center};

    fn local() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    fn prime(d: &Domain, gens: &[&str]) -> PrimeIdeal {
        PrimeIdeal::new(d, gens.iter().map(|g| parse_element(d, g).unwrap().num).collect()).unwrap()
    }

    fn candidates(d: &Domain) -> Vec<PrimeIdeal> {
        vec![prime(d, &["X"]), prime(d, &["Y"]), prime(d, &["X - Y"]), prime(d, &["X", "Y"])]
    }

    #[test]
    fn spectra_of_d_v_and_ex53() {
        let d = local();
        let n = prime(&d, &["X", "Y"]);
        let s = quasi_star_spectrum(&d, &SemistarOp::identity(), &candidates(&d)).unwrap();
        assert!(same_primes(&d, &s.maximal, std::slice::from_ref(&n)));
        let s = quasi_star_spectrum(&d, &SemistarOp::v(), &candidates(&d)).unwrap();
        assert!(same_primes(&d, &s.maximal, &candidates(&d)[..3]));
        let s = quasi_star_spectrum(&d, &SemistarOp::ex53(&d).unwrap(), &candidates(&d)).unwrap();
        assert!(same_primes(&d, &s.maximal, &[n]));
        assert!(s.certain);
    }

    #[test]
    fn trivial_operation_has_no_quasi_ideals() {
        let d = local();
        let i = FractionalIdeal::integral(&d, vec![d.var(0)]).unwrap();
        assert!(!is_quasi_star_ideal(&d, &i, &SemistarOp::trivial()).unwrap().quasi);
    }

    #[test]
    fn conductor_is_divisorial() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let c = FractionalIdeal::integral(&d, vec![d.int(2), &d.one() + &d.var(0)]).unwrap();
        assert!(is_quasi_star_ideal(&d, &c, &SemistarOp::v()).unwrap().quasi);
    }
}
