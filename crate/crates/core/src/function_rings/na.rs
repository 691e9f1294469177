use crate::domains::{Domain, FractionalIdeal, KElem, PrimeIdeal};
use crate::exact::MultiPoly;
use crate::semistar::quasi::same_primes;
use crate::semistar::{quasi_star_spectrum, Grade, Result, SemistarOp};

use super::{
    ambient_contains, colon, content, lift, spread, with_content, CertWitness, MembershipCertificate,
    RationalFunctionElem, Verdict,
};

fn trivializes(d: &Domain, star: &SemistarOp, c: &FractionalIdeal) -> Result<Verdict> {
    let cl = star.apply(d, c)?;
    Ok(if cl.contains(d, &d.k_from_d(&d.one()))? {
        Verdict::Yes
    } else if cl.grade == Grade::Exact {
        Verdict::No
    } else {
        Verdict::Unknown
    })
}

/// `h ∈ N(★)`, i.e. `c(h)^★ = D^★`, tested as `1 ∈ c(h)^★`.
pub fn in_multiplicative_set_n(d: &Domain, star: &SemistarOp, h: &MultiPoly) -> Result<Verdict> {
    trivializes(d, star, &content(d, h)?)
}

/// Whether `(gens·D[X†] : f)` meets `N(★)`. Some `h` in the colon has content
/// `Σ c(j_i)` (spread the generators `j_i`), and every element's content lies
/// in that sum, so the colon meets `N(★)` iff `1 ∈ (Σ c(j_i))^★`.
fn colon_meets_n(
    d: &Domain,
    star: &SemistarOp,
    gens: &[MultiPoly],
    f: &MultiPoly,
) -> Result<MembershipCertificate> {
    let j = colon(d, gens, f);
    let coeffs: Vec<MultiPoly> = j
        .iter()
        .flat_map(|g| g.coefficients_in(d.nvars()))
        .map(|c| d.reduce(&c))
        .filter(|c| !c.is_zero())
        .collect();
    let c = FractionalIdeal::integral(d, coeffs)?.normalize(d);
    Ok(match trivializes(d, star, &c)? {
        Verdict::Yes => {
            let h = spread(d, &j);
            debug_assert!(ambient_contains(d, gens, &d.reduce(&(&h * f))));
            MembershipCertificate::new(Verdict::Yes, Some(CertWitness::NElement(h)), "colon content")
        }
        v => MembershipCertificate::new(v, Some(CertWitness::ContentIdeal(c)), "colon content"),
    })
}

/// `f/g ∈ Na(D,★)`.
pub fn na_member(d: &Domain, star: &SemistarOp, e: &RationalFunctionElem) -> Result<MembershipCertificate> {
    if e.num.is_zero() {
        let one = MultiPoly::one(d.nvars() + 1);
        return Ok(MembershipCertificate::new(Verdict::Yes, Some(CertWitness::NElement(one)), "zero"));
    }
    colon_meets_n(d, star, std::slice::from_ref(&e.den), &e.num)
}

/// Re-verifies a `yes` witness of [`na_member`]: `h ∈ N(★)` and `h·f ∈ g·D[X†]`.
pub fn recheck_na(d: &Domain, star: &SemistarOp, e: &RationalFunctionElem, cert: &MembershipCertificate) -> Result<bool> {
    let Some(CertWitness::NElement(h)) = &cert.witness else {
        return Ok(false);
    };
    Ok(in_multiplicative_set_n(d, star, h)? == Verdict::Yes
        && ambient_contains(d, std::slice::from_ref(&e.den), &d.reduce(&(h * &e.num))))
}

/// `E·Na(D,★) ∩ K` as a membership oracle.
#[derive(Clone, Debug)]
pub struct NaContraction {
    pub star: SemistarOp,
    pub ideal: FractionalIdeal,
}

pub fn extend_contract_na(star: &SemistarOp, e: &FractionalIdeal) -> NaContraction {
    NaContraction {
        star: star.clone(),
        ideal: e.clone(),
    }
}

impl NaContraction {
    /// `z = u/w ∈ (1/e)·I·Na` iff `s·e·u ∈ w·I·D[X†]` for some `s ∈ N(★)`.
    pub fn member(&self, d: &Domain, z: &KElem) -> Result<MembershipCertificate> {
        if z.num.is_zero() {
            return Ok(MembershipCertificate::new(Verdict::Yes, None, "zero"));
        }
        let gens: Vec<MultiPoly> = self.ideal.gens.iter().map(|g| lift(&d.mul(&z.den, g))).collect();
        let f = lift(&d.mul(&self.ideal.den, &z.num));
        colon_meets_n(d, &self.star, &gens, &f)
    }

    pub fn contains(&self, d: &Domain, z: &KElem) -> Result<bool> {
        Ok(self.member(d, z)?.verdict == Verdict::Yes)
    }
}

#[derive(Clone, Debug)]
pub struct TraceCheck {
    pub prime: PrimeIdeal,
    /// `h` with `c(h) = Q` lies in `N(★)`; expected `no`.
    pub content_in_n: Verdict,
    /// `1 ∈ Q·Na(D,★)`; expected `no`.
    pub one_in_extension: Verdict,
}

/// The quasi-`★_f`-maximal primes among candidates, with each checked to be
/// the trace of a maximal ideal of `Na(D,★)`.
#[derive(Clone, Debug)]
pub struct MaximalTrace {
    pub maximal: Vec<PrimeIdeal>,
    pub checks: Vec<TraceCheck>,
    /// The spectrum verdicts are all exact.
    pub certain: bool,
}

impl MaximalTrace {
    pub fn consistent(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.content_in_n == Verdict::No && c.one_in_extension == Verdict::No)
    }
}

pub fn na_maximal_trace(d: &Domain, star: &SemistarOp, candidates: &[PrimeIdeal]) -> Result<MaximalTrace> {
    let spec = quasi_star_spectrum(d, &star.finite(), candidates)?;
    let mut checks = Vec::new();
    for q in &spec.maximal {
        let h = with_content(d, &q.gens);
        let qi = FractionalIdeal::integral(d, q.gens.clone())?;
        checks.push(TraceCheck {
            prime: q.clone(),
            content_in_n: in_multiplicative_set_n(d, star, &h)?,
            one_in_extension: extend_contract_na(star, &qi).member(d, &d.k_from_d(&d.one()))?.verdict,
        });
    }
    Ok(MaximalTrace {
        maximal: spec.maximal,
        checks,
        certain: spec.certain,
    })
}

#[derive(Clone, Debug)]
pub struct Separator {
    pub elem: RationalFunctionElem,
    pub first: Verdict,
    pub second: Verdict,
}

#[derive(Clone, Debug)]
pub struct NaComparison {
    pub m1: Vec<PrimeIdeal>,
    pub m2: Vec<PrimeIdeal>,
    pub m_equal: bool,
    /// Sampled elements on which the two memberships differ.
    pub disagreements: Vec<RationalFunctionElem>,
    /// Sampled elements with an `unknown` membership.
    pub unknown: usize,
    /// `1/h` with `c(h)` a candidate prime, in exactly one of the two rings.
    pub separator: Option<Separator>,
}

impl NaComparison {
    /// Whether the membership evidence matches the comparison of the M-sets.
    pub fn consistent(&self) -> bool {
        if self.m_equal {
            self.disagreements.is_empty() && self.separator.is_none()
        } else {
            self.separator.is_some()
        }
    }

    pub fn na_equal(&self) -> bool {
        self.disagreements.is_empty() && self.separator.is_none()
    }
}

/// Compares `Na(D,★1)` and `Na(D,★2)` against the quasi-maximal sets of the
/// finite-type parts.
pub fn na_equal_iff_m(
    d: &Domain,
    s1: &SemistarOp,
    s2: &SemistarOp,
    candidates: &[PrimeIdeal],
    samples: &[RationalFunctionElem],
) -> Result<NaComparison> {
    let m1 = quasi_star_spectrum(d, &s1.finite(), candidates)?.maximal;
    let m2 = quasi_star_spectrum(d, &s2.finite(), candidates)?.maximal;
    let m_equal = same_primes(d, &m1, &m2);
    let mut disagreements = Vec::new();
    let mut unknown = 0;
    for e in samples {
        let (a, b) = (na_member(d, s1, e)?.verdict, na_member(d, s2, e)?.verdict);
        if a == Verdict::Unknown || b == Verdict::Unknown {
            unknown += 1;
        } else if a != b {
            disagreements.push(e.clone());
        }
    }
    // primes in exactly one M-set first
    let only = |x: &[PrimeIdeal], y: &[PrimeIdeal]| -> Vec<PrimeIdeal> {
        x.iter()
            .filter(|p| !y.iter().any(|q| q.is_subset(d, p) && p.is_subset(d, q)))
            .cloned()
            .collect()
    };
    let mut order = only(&m1, &m2);
    order.extend(only(&m2, &m1));
    order.extend(candidates.iter().cloned());
    let mut separator = None;
    for q in order {
        let h = with_content(d, &q.gens);
        let elem = RationalFunctionElem::new(d, MultiPoly::one(d.nvars() + 1), h)?;
        let (a, b) = (na_member(d, s1, &elem)?.verdict, na_member(d, s2, &elem)?.verdict);
        if matches!((a, b), (Verdict::Yes, Verdict::No) | (Verdict::No, Verdict::Yes)) {
            separator = Some(Separator {
                elem,
                first: a,
                second: b,
            });
            break;
        }
    }
    Ok(NaComparison {
        m1,
        m2,
        m_equal,
        disagreements,
        unknown,
        separator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse_element, Center};

    fn local() -> Domain {
        Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
    }

    #[test]
    fn content_of_linear_form() {
        let d = local();
        let h = RationalFunctionElem::parse(&d, "X + Y*$X").unwrap().num;
        assert_eq!(in_multiplicative_set_n(&d, &SemistarOp::v(), &h).unwrap(), Verdict::Yes);
        assert_eq!(in_multiplicative_set_n(&d, &SemistarOp::identity(), &h).unwrap(), Verdict::No);
        let one = MultiPoly::one(3);
        assert_eq!(in_multiplicative_set_n(&d, &SemistarOp::trivial(), &one).unwrap(), Verdict::Yes);
    }

    #[test]
    fn nagata_memberships() {
        let d = local();
        let e = RationalFunctionElem::parse(&d, "1/(X + Y*$X)").unwrap();
        let c = na_member(&d, &SemistarOp::v(), &e).unwrap();
        assert_eq!(c.verdict, Verdict::Yes);
        assert!(recheck_na(&d, &SemistarOp::v(), &e, &c).unwrap());
        assert_eq!(na_member(&d, &SemistarOp::identity(), &e).unwrap().verdict, Verdict::No);
        let e = RationalFunctionElem::parse(&d, "(X^2 + X*Y*$X)*(1 + $X)/(X + Y*$X)").unwrap();
        let c = na_member(&d, &SemistarOp::identity(), &e).unwrap();
        assert_eq!(c.verdict, Verdict::Yes);
        assert!(recheck_na(&d, &SemistarOp::identity(), &e, &c).unwrap());
    }

    #[test]
    fn quadratic_nagata_ring() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let e = RationalFunctionElem::parse(&d, "1/(2 + (1+w)*$X)").unwrap();
        // the conductor is a proper divisorial ideal
        assert_eq!(na_member(&d, &SemistarOp::v(), &e).unwrap().verdict, Verdict::No);
        let e = RationalFunctionElem::parse(&d, "1/(2 + w*$X)").unwrap();
        let c = na_member(&d, &SemistarOp::identity(), &e).unwrap();
        assert_eq!(c.verdict, Verdict::Yes);
        assert!(recheck_na(&d, &SemistarOp::identity(), &e, &c).unwrap());
    }

    #[test]
    fn extension_contraction_of_two_generator_ideal() {
        let d = local();
        let e = FractionalIdeal::integral(&d, vec![d.var(0).pow(2), &d.var(0) * &d.var(1)]).unwrap();
        let o = extend_contract_na(&SemistarOp::v(), &e);
        for (z, expect) in [("X", true), ("Y", false), ("X/Y", false), ("X^2/Y", false), ("1", false)] {
            assert_eq!(o.contains(&d, &parse_element(&d, z).unwrap()).unwrap(), expect, "{z}");
        }
        let p = FractionalIdeal::integral(&d, vec![&d.var(0) + &d.var(1)]).unwrap();
        let o = extend_contract_na(&SemistarOp::identity(), &p);
        assert!(o.contains(&d, &parse_element(&d, "X^2 - Y^2").unwrap()).unwrap());
        assert!(!o.contains(&d, &parse_element(&d, "X").unwrap()).unwrap());
    }

    #[test]
    fn maximal_traces() {
        let d = local();
        let prime = |g: &str| PrimeIdeal::new(&d, vec![parse_element(&d, g).unwrap().num]).unwrap();
        let n = PrimeIdeal::center(&d).unwrap();
        let cands = vec![prime("X"), prime("Y"), n.clone()];
        let tr = na_maximal_trace(&d, &SemistarOp::v(), &cands).unwrap();
        assert!(same_primes(&d, &tr.maximal, &cands[..2]));
        assert!(tr.consistent());
        let tr = na_maximal_trace(&d, &SemistarOp::ex53(&d).unwrap(), &cands).unwrap();
        assert!(same_primes(&d, &tr.maximal, &[n]));
        assert!(tr.consistent());
        let z5 = Domain::integers(Some(5.into())).unwrap();
        let ps: Vec<PrimeIdeal> = [3, 5].iter().map(|&p| PrimeIdeal::new(&z5, vec![z5.int(p)]).unwrap()).collect();
        let tr = na_maximal_trace(&z5, &SemistarOp::v(), &ps).unwrap();
        assert!(tr.consistent());
        assert!(same_primes(&z5, &tr.maximal, &ps[1..]));
    }

    #[test]
    fn nagata_rings_compared() {
        let d = local();
        let n = PrimeIdeal::center(&d).unwrap();
        let prime = |g: &str| PrimeIdeal::new(&d, vec![parse_element(&d, g).unwrap().num]).unwrap();
        let cands = vec![prime("X"), prime("Y"), prime("X - Y"), n];
        let samples: Vec<RationalFunctionElem> = ["1/(X + Y*$X)", "X/(Y + $X)", "(1 + X*$X)/(1 + Y*$X)"]
            .iter()
            .map(|s| RationalFunctionElem::parse(&d, s).unwrap())
            .collect();
        let cmp = na_equal_iff_m(&d, &SemistarOp::identity(), &SemistarOp::ex53(&d).unwrap(), &cands, &samples).unwrap();
        assert!(cmp.m_equal && cmp.consistent() && cmp.na_equal());
        let cmp = na_equal_iff_m(&d, &SemistarOp::identity(), &SemistarOp::v(), &cands, &samples).unwrap();
        assert!(!cmp.m_equal && cmp.consistent());
        let sep = cmp.separator.unwrap();
        assert_eq!((sep.first, sep.second), (Verdict::No, Verdict::Yes));
        assert!(sep.elem.same(&d, &RationalFunctionElem::parse(&d, "1/(X + Y*$X)").unwrap()));
    }
}
