use num_rational::BigRational;
use num_traits::One;

use crate::domains::{Domain, FractionalIdeal, KElem, PrimeIdeal, ValuationSpec};
use crate::exact::MultiPoly;
use crate::semistar::{is_star_valuation_overring, pool, Grade, Result, SemistarOp};

use super::{content, fvar, lift, with_content, CertWitness, MembershipCertificate, RationalFunctionElem, Verdict};

/// Search parameters of [`kr_member`].
#[derive(Clone, Debug)]
pub struct KrOptions {
    /// Maximal number of factors in a multiplier content.
    pub depth: u32,
    /// Multipliers whose products with `c(f)` or `c(g)` have a generator of
    /// higher total degree are skipped; skipping only weakens `yes` to
    /// `unknown`.
    pub max_degree: u32,
    /// Candidate obstructions; each is used only after passing the
    /// ★-valuation-overring test.
    pub valuations: Vec<ValuationSpec>,
    /// Extra ideals for that test, besides `c(f)`, `c(g)` and the center.
    pub samples: Vec<FractionalIdeal>,
}

impl KrOptions {
    pub fn new(d: &Domain) -> KrOptions {
        KrOptions {
            depth: 2,
            max_degree: 8,
            valuations: default_valuations(d),
            samples: vec![],
        }
    }
}

/// Discrete valuations along the atoms that are prime elements, and the
/// coordinate and diagonal monomial weights.
pub fn default_valuations(d: &Domain) -> Vec<ValuationSpec> {
    let mut out: Vec<ValuationSpec> = d.atoms().into_iter().map(ValuationSpec::DvrAlongPrime).collect();
    if d.is_poly() {
        let n = d.nvars();
        let unit = |i: usize| (0..n).map(|j| BigRational::from_integer(((i == j) as i64).into())).collect();
        out.extend((0..n).map(|i| ValuationSpec::MonomialWeight(unit(i))));
        out.push(ValuationSpec::MonomialWeight(vec![BigRational::one(); n]));
    }
    out.retain(|v| v.validate(d).is_ok());
    out
}

/// `f/g ∈ Kr(D,★)`: some `h` has `(c(f)c(h))^★ ⊆ (c(g)c(h))^★`.
pub fn kr_member(d: &Domain, star: &SemistarOp, e: &RationalFunctionElem, opts: &KrOptions) -> Result<MembershipCertificate> {
    let one = MultiPoly::one(d.nvars() + 1);
    if e.num.is_zero() {
        return Ok(MembershipCertificate::new(Verdict::Yes, Some(CertWitness::Multiplier(one)), "zero"));
    }
    let (cf, cg) = (content(d, &e.num)?, content(d, &e.den)?);
    let cl = star.apply(d, &cg)?;
    let mut escape = None;
    for z in cf.elements(d) {
        if !cl.contains(d, &z)? {
            escape = Some(z);
            break;
        }
    }
    let Some(escape) = escape else {
        return Ok(MembershipCertificate::new(Verdict::Yes, Some(CertWitness::Multiplier(one)), "content inclusion"));
    };
    if star.flags.eab_claimed && cl.grade == Grade::Exact {
        return Ok(MembershipCertificate::new(Verdict::No, Some(CertWitness::Escapes(escape)), "e.a.b. cancellation"));
    }
    let mut factors = Vec::new();
    if let Some(m) = PrimeIdeal::center(d) {
        factors.push(FractionalIdeal::integral(d, m.gens)?);
    }
    factors.extend([cf.clone(), cg.clone(), cf.sum(d, &cg)]);
    let candidates = pool(d, &factors, opts.depth);
    let degree = |i: &FractionalIdeal| i.gens.iter().map(|g| g.total_degree()).max().unwrap_or(0);
    for (_, h) in candidates.iter().skip(1) {
        let (fh, gh) = (cf.product(d, h), cg.product(d, h));
        if degree(&fh).max(degree(&gh)) > opts.max_degree {
            continue;
        }
        if star.closure_subset(d, &fh, &gh)? {
            let hp = with_content(d, &h.integral_gens(d)?);
            return Ok(MembershipCertificate::new(Verdict::Yes, Some(CertWitness::Multiplier(hp)), "multiplier search"));
        }
    }
    let mut tests = opts.samples.clone();
    tests.extend(factors);
    for v in &opts.valuations {
        let (vf, vg) = (v.min_value(d, &cf), v.min_value(d, &cg));
        if vf < vg && is_star_valuation_overring(d, v, star, &tests)?.holds {
            let w = CertWitness::Obstruction { val: v.clone(), vf, vg };
            return Ok(MembershipCertificate::new(Verdict::No, Some(w), "valuation obstruction"));
        }
    }
    Ok(MembershipCertificate::new(Verdict::Unknown, None, "search exhausted"))
}

/// Re-verifies a `yes` multiplier: `(c(f)c(h))^★ ⊆ (c(g)c(h))^★`.
pub fn recheck_kr(d: &Domain, star: &SemistarOp, e: &RationalFunctionElem, cert: &MembershipCertificate) -> Result<bool> {
    let Some(CertWitness::Multiplier(h)) = &cert.witness else {
        return Ok(false);
    };
    if e.num.is_zero() {
        return Ok(true);
    }
    let ch = content(d, h)?;
    let (cf, cg) = (content(d, &e.num)?, content(d, &e.den)?);
    star.closure_subset(d, &cf.product(d, &ch), &cg.product(d, &ch))
}

/// `E·Kr(D,★) ∩ K` as a membership oracle.
#[derive(Clone, Debug)]
pub struct KrContraction {
    pub star: SemistarOp,
    pub ideal: FractionalIdeal,
    pub opts: KrOptions,
}

pub fn extend_contract_kr(star: &SemistarOp, e: &FractionalIdeal, opts: &KrOptions) -> KrContraction {
    KrContraction {
        star: star.clone(),
        ideal: e.clone(),
        opts: opts.clone(),
    }
}

impl KrContraction {
    /// `E·Kr = f_E·Kr` for `f_E` with content `E`, so `z ∈ E·Kr` iff
    /// `z / f_E ∈ Kr`.
    pub fn member(&self, d: &Domain, z: &KElem) -> Result<MembershipCertificate> {
        let f_e = with_content(d, &self.ideal.gens);
        let num = lift(&d.mul(&self.ideal.den, &z.num));
        let den = d.reduce(&(&lift(&z.den) * &f_e));
        kr_member(d, &self.star, &RationalFunctionElem::new(d, num, den)?, &self.opts)
    }

    pub fn contains(&self, d: &Domain, z: &KElem) -> Result<bool> {
        Ok(self.member(d, z)?.verdict == Verdict::Yes)
    }
}

#[derive(Clone, Debug)]
pub struct BezoutEvidence {
    /// `h = f + X†^n·g`, so `c(h) = c(f) + c(g)`.
    pub h: MultiPoly,
    pub n: u32,
    pub f_over_h: MembershipCertificate,
    pub g_over_h: MembershipCertificate,
}

impl BezoutEvidence {
    pub fn holds(&self) -> bool {
        self.f_over_h.verdict == Verdict::Yes && self.g_over_h.verdict == Verdict::Yes
    }
}

/// `(f, g)·Kr = h·Kr` for `h = f + X†^n·g` with `n > deg f`.
pub fn kr_bezout_combine(d: &Domain, star: &SemistarOp, f: &MultiPoly, g: &MultiPoly, opts: &KrOptions) -> Result<BezoutEvidence> {
    let n = f.degree_in(d.nvars()) + 1;
    let h = d.reduce(&(f + &(g * &fvar(d).pow(n))));
    let f_over_h = kr_member(d, star, &RationalFunctionElem::new(d, f.clone(), h.clone())?, opts)?;
    let g_over_h = kr_member(d, star, &RationalFunctionElem::new(d, g.clone(), h.clone())?, opts)?;
    Ok(BezoutEvidence { h, n, f_over_h, g_over_h })
}
