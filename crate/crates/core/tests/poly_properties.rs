use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use technic::locus::extract_linear_factors;
use technic::poly::{
    buchberger_with, reduce, s_polynomial, GroebnerConfig, Monomial, MonomialOrder, MultiPoly,
    PolyError, Rat, Ring,
};

fn ring3(order: MonomialOrder) -> Arc<Ring> {
    Ring::new(["x", "y", "z"], order)
}

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn terms(
    nvars: usize,
    max_exp: u16,
    max_terms: usize,
) -> impl Strategy<Value = Vec<(Vec<u16>, Rat)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), rat()),
        0..=max_terms,
    )
}

fn build(ring: &Arc<Ring>, t: &[(Vec<u16>, Rat)]) -> MultiPoly {
    MultiPoly::from_terms(
        ring,
        t.iter()
            .map(|(e, c)| (Monomial::from_exponents(e.clone()), c.clone())),
    )
}

fn poly3() -> impl Strategy<Value = Vec<(Vec<u16>, Rat)>> {
    terms(3, 3, 6)
}

/// Exponent vector to coefficient, zero entries dropped: an order-free view.
fn dense(p: &MultiPoly) -> BTreeMap<Vec<u16>, Rat> {
    p.terms()
        .iter()
        .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
        .collect()
}

fn naive_mul(a: &[(Vec<u16>, Rat)], b: &[(Vec<u16>, Rat)]) -> BTreeMap<Vec<u16>, Rat> {
    let mut out: BTreeMap<Vec<u16>, Rat> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(|| Rat::from_integer(0.into())) += ca * cb;
        }
    }
    out.retain(|_, c| *c != Rat::from_integer(0.into()));
    out
}

fn point() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(rat(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        let r = ring3(MonomialOrder::GrevLex);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &MultiPoly::zero(&r), a.clone());
        prop_assert_eq!(&a * &MultiPoly::constant(&r, Rat::from_integer(1.into())), a.clone());
        prop_assert_eq!(-&(-&a), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn product_matches_schoolbook(a in poly3(), b in poly3()) {
        let r = ring3(MonomialOrder::Lex);
        let p = &build(&r, &a) * &build(&r, &b);
        prop_assert_eq!(dense(&p), naive_mul(&a, &b));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly3(), b in poly3(), pt in point()) {
        let r = ring3(MonomialOrder::GrevLex);
        let (pa, pb) = (build(&r, &a), build(&r, &b));
        prop_assert_eq!((&pa * &pb).eval(&pt), pa.eval(&pt) * pb.eval(&pt));
        prop_assert_eq!((&pa - &pb).eval(&pt), pa.eval(&pt) - pb.eval(&pt));
    }

    #[test]
    fn order_changes_keep_the_polynomial(a in poly3()) {
        let p = build(&ring3(MonomialOrder::GrevLex), &a);
        let q = p.with_order(MonomialOrder::Lex);
        prop_assert_eq!(dense(&p), dense(&q));
        prop_assert_eq!(q.with_order(MonomialOrder::GrevLex), p);
    }

    #[test]
    fn text_round_trip(a in poly3()) {
        let r = ring3(MonomialOrder::GrevLex);
        let p = build(&r, &a).primitive();
        let back = MultiPoly::parse(&r, &p.to_normalized_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn division_reexpands(p in terms(3, 4, 8), f in terms(3, 2, 3), g in terms(3, 2, 3)) {
        let r = ring3(MonomialOrder::GrevLex);
        let p = build(&r, &p);
        let divisors = [build(&r, &f), build(&r, &g)];
        let d = reduce(&p, &divisors);
        prop_assert_eq!(d.recombine(&divisors), p);
        for (m, _) in d.remainder.terms() {
            for g in &divisors {
                if let Some(lm) = g.leading_monomial() {
                    prop_assert!(!lm.divides(m));
                }
            }
        }
    }

    #[test]
    fn linear_factors_multiply_back(
        lines in prop::collection::vec((rat(), rat(), rat()), 0..=3),
        rest in terms(2, 2, 4),
    ) {
        let r = Ring::new(["x", "y"], MonomialOrder::GrevLex);
        let mut p = build(&r, &rest);
        prop_assume!(!p.is_zero());
        let mut expected = 0;
        for (a, b, c) in &lines {
            let l = &(&MultiPoly::var(&r, 0).scale(a) + &MultiPoly::var(&r, 1).scale(b)) + &MultiPoly::constant(&r, c.clone());
            if l.total_degree() == Some(1) {
                p = &p * &l;
                expected += 1;
            }
        }
        let f = extract_linear_factors(&p, &[]);
        prop_assert_eq!(f.product(), p);
        let found: u32 = f.factors.iter().map(|(_, m)| m).sum();
        prop_assert!(found >= expected, "found {} of {}", found, expected);
        for (l, _) in &f.factors {
            prop_assert_eq!(l.total_degree(), Some(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn s_polynomials_of_a_basis_reduce_to_zero(
        gens in prop::collection::vec(terms(3, 2, 3), 1..=3),
        lex in any::<bool>(),
    ) {
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::GrevLex };
        let r = ring3(order.clone());
        let gens: Vec<MultiPoly> = gens.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = match buchberger_with(&gens, &order, &GroebnerConfig { pair_budget: 2_000 }) {
            Ok(gb) => gb,
            Err(PolyError::PairBudget { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let basis = gb.polys();
        for (i, f) in basis.iter().enumerate() {
            for g in &basis[i + 1..] {
                prop_assert!(reduce(&s_polynomial(f, g), basis).remainder.is_zero());
            }
        }
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
    }
}
