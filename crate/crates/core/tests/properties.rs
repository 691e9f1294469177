use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use semistar_core::domains::{Center, Domain, FractionalIdeal};
use semistar_core::exact::{groebner_basis, normal_form, poly_gcd, MonomialOrder, MultiPoly, PolyIdeal, ZIdeal};
use semistar_core::function_rings::{content, lift, spread};
use semistar_core::semistar::SemistarOp;

fn local() -> Domain {
    Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap()
}

fn monomial_ideal(d: &Domain, exps: &[(u32, u32)]) -> FractionalIdeal {
    let gens = exps.iter().map(|&(a, b)| d.mul(&d.var(0).pow(a), &d.var(1).pow(b))).collect();
    FractionalIdeal::integral(d, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integral_closure_is_a_closure(exps in prop::collection::vec((0u32..4, 0u32..4), 1..4)) {
        let d = local();
        let b = SemistarOp::b(&d).unwrap();
        let e = monomial_ideal(&d, &exps);
        let c = b.apply(&d, &e).unwrap();
        let p = c.presentation().expect("monomial closures are presented").clone();
        prop_assert!(e.is_subset(&d, &p));
        let again = b.apply(&d, &p).unwrap();
        prop_assert!(again.presentation().unwrap().same(&d, &p));
    }

    #[test]
    fn integer_ideals_are_principal(a in 1i64..200, b in 1i64..200) {
        let one = |n: i64| MultiPoly::from_int(1, n);
        let i = ZIdeal::new(vec![one(a), one(b)]).unwrap();
        let g = a.gcd(&b);
        prop_assert!(i.contains(&one(g)));
        if g > 1 {
            prop_assert!(!i.contains(&one(g - 1)));
        }
    }

    #[test]
    fn spread_content_is_the_sum(exps in prop::collection::vec((0u32..3, 0u32..3), 1..4)) {
        let d = local();
        let parts: Vec<MultiPoly> = exps.iter().map(|&(a, b)| lift(&d.mul(&d.var(0).pow(a), &d.var(1).pow(b)))).collect();
        let c = content(&d, &spread(&d, &parts)).unwrap();
        prop_assert!(c.same(&d, &monomial_ideal(&d, &exps)));
    }

    #[test]
    fn quadratic_norms_lie_in_principal_ideals(a in -6i64..6, b in -6i64..6) {
        prop_assume!(a != 0 || b != 0);
        let q = Domain::quadratic(BigInt::from(-3)).unwrap();
        let z = &q.int(a) + &q.mul(&q.int(b), &q.var(0));
        let n = q.norm(&z).unwrap();
        prop_assert!(q.ideal_contains(std::slice::from_ref(&z), &MultiPoly::constant(1, BigRational::from_integer(n))));
    }
}

/// Products of powers of `X`, `Y`, `X - Y`, `X + Y`, `X + 1`.
fn factored(exps: &[u32; 5]) -> MultiPoly {
    let (x, y) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
    let one = MultiPoly::one(2);
    let atoms = [x.clone(), y.clone(), &x - &y, &x + &y, &x + &one];
    atoms.iter().zip(exps).fold(one.clone(), |acc, (a, &e)| &acc * &a.pow(e))
}

fn factored_list(e: &[[u32; 5]]) -> Vec<MultiPoly> {
    e.iter().map(factored).collect()
}

/// Membership by a full Gröbner basis, bypassing every shortcut.
fn gb_contains(gens: &[MultiPoly], z: &MultiPoly) -> bool {
    let gb = groebner_basis(gens, MonomialOrder::DegRevLex).unwrap();
    normal_form(z, &gb, MonomialOrder::DegRevLex).is_zero()
}

fn exps() -> impl Strategy<Value = [u32; 5]> {
    [0u32..3, 0u32..3, 0u32..2, 0u32..2, 0u32..2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gcd_divides_and_keeps_common_factors(f in exps(), g in exps(), h in exps()) {
        let (f, g, h) = (factored(&f), factored(&g), factored(&h));
        let (a, b) = (&f * &g, &f * &h);
        let c = poly_gcd(&a, &b);
        prop_assert!(a.div_exact(&c).is_some() && b.div_exact(&c).is_some());
        prop_assert!(c.div_exact(&f).is_some());
    }

    #[test]
    fn membership_shortcuts_agree_with_groebner(
        gens in prop::collection::vec(exps(), 1..4),
        common in exps(),
        z in exps(),
        mult in exps(),
    ) {
        let c = factored(&common);
        let gens: Vec<MultiPoly> = factored_list(&gens).iter().map(|g| g * &c).collect();
        let i = PolyIdeal::new(gens.clone()).unwrap();
        for z in [factored(&z), &factored(&z) * &gens[0], &(&factored(&mult) * &gens[0]) + &gens[gens.len() - 1]] {
            prop_assert_eq!(i.contains(&z), gb_contains(&gens, &z));
        }
    }

    #[test]
    fn intersections_and_colons_are_sound(
        a in prop::collection::vec(exps(), 1..3),
        b in prop::collection::vec(exps(), 1..3),
        g in exps(),
    ) {
        let (ga, gb) = (factored_list(&a), factored_list(&b));
        let (i, j) = (PolyIdeal::new(ga.clone()).unwrap(), PolyIdeal::new(gb.clone()).unwrap());
        let meet = i.intersect(&j);
        for m in meet.generators() {
            prop_assert!(gb_contains(&ga, m) && gb_contains(&gb, m));
        }
        for p in i.product(&j).generators() {
            prop_assert!(gb_contains(meet.generators(), p));
        }
        let g = factored(&g);
        let col = i.colon_elem(&g);
        for q in col.generators() {
            prop_assert!(gb_contains(&ga, &(q * &g)));
        }
        for p in &ga {
            prop_assert!(gb_contains(col.generators(), p));
        }
    }
}
