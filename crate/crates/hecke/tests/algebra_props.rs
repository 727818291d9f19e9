use std::collections::HashMap;

use hecke::algebra::{int, parse_poly, ratio, Coef, GaussRules, LaurentPoly, Monomial, RationalFunction, Symbol};
use proptest::prelude::*;

fn syms() -> Vec<Symbol> {
    vec![Symbol::z(1), Symbol::z(2), Symbol::u()]
}

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    let term = (-3i64..=3, prop::collection::vec(-2i32..=2, 3));
    prop::collection::vec(term, 0..=max_terms).prop_map(|terms| {
        let s = syms();
        LaurentPoly::from_terms(terms.into_iter().map(|(c, e)| {
            (Monomial::from_pairs(s.iter().copied().zip(e)), int(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly_strategy(3).prop_filter("nonzero", |p| !p.is_zero())
}

fn point_strategy() -> impl Strategy<Value = HashMap<Symbol, Coef>> {
    prop::collection::vec((1i64..=7, 1i64..=5), 3).prop_map(|vals| {
        syms().into_iter().zip(vals).map(|(s, (p, q))| (s, ratio(p, q))).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_is_commutative_and_associative(a in poly_strategy(4), b in poly_strategy(4), c in poly_strategy(4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &LaurentPoly::zero(), a.clone());
    }

    #[test]
    fn multiplication_is_commutative_associative_distributive(a in poly_strategy(3), b in poly_strategy(3), c in poly_strategy(3)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly_strategy(4), b in poly_strategy(4), pt in point_strategy()) {
        let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
        prop_assert_eq!((&a * &b).eval(&pt).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&pt).unwrap(), &ea + &eb);
    }

    #[test]
    fn exact_division_recovers_factor(a in poly_strategy(3), q in nonzero_poly()) {
        prop_assert_eq!((&a * &q).exact_divide(&q).unwrap(), a);
    }

    #[test]
    fn render_then_parse_is_identity(a in poly_strategy(5)) {
        let text = a.to_string();
        prop_assert_eq!(parse_poly(&text, None).unwrap(), a);
    }

    #[test]
    fn weyl_substitution_is_multiplicative(a in poly_strategy(3), b in poly_strategy(3), flip in any::<bool>()) {
        let z = vec![Symbol::z(1), Symbol::z(2)];
        let m = if flip { vec![vec![0, 1], vec![1, 0]] } else { vec![vec![-1, 0], vec![0, -1]] };
        prop_assert_eq!((&a * &b).substitute(&z, &m), &a.substitute(&z, &m) * &b.substitute(&z, &m));
        prop_assert_eq!(a.substitute(&z, &m).substitute(&z, &m), a);
    }

    #[test]
    fn rational_functions_agree_with_evaluation(
        a in poly_strategy(3), b in nonzero_poly(), c in poly_strategy(3), d in nonzero_poly(), pt in point_strategy()
    ) {
        let (eb, ed) = (b.eval(&pt).unwrap(), d.eval(&pt).unwrap());
        prop_assume!(!num_traits::Zero::is_zero(&eb) && !num_traits::Zero::is_zero(&ed));
        let f = RationalFunction::from_fraction(a.clone(), b.clone()).unwrap();
        let g = RationalFunction::from_fraction(c.clone(), d.clone()).unwrap();
        let fa = a.eval(&pt).unwrap() / &eb;
        let gc = c.eval(&pt).unwrap() / &ed;
        prop_assert_eq!((&f + &g).eval(&pt).unwrap(), &fa + &gc);
        prop_assert_eq!((&f * &g).eval(&pt).unwrap(), &fa * &gc);
        prop_assert_eq!(&(&f * &RationalFunction::from_poly(b.clone())), &RationalFunction::from_poly(a.clone()));
    }

    #[test]
    fn gauss_reduction_is_a_ring_map(ea in prop::collection::vec(0i32..=3, 2), eb in prop::collection::vec(0i32..=3, 2), c in -3i64..=3) {
        let rules = GaussRules::new(3);
        let g = |e: &[i32]| LaurentPoly::monomial(Monomial::from_pairs([(Symbol::new("g1"), e[0]), (Symbol::new("g2"), e[1])]));
        let a = &g(&ea) + &LaurentPoly::int(c);
        let b = &g(&eb) * &LaurentPoly::var(Symbol::z(1));
        let lhs = rules.reduce(&(&a * &b));
        let rhs = rules.reduce(&(&rules.reduce(&a) * &rules.reduce(&b)));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(rules.reduce(&lhs), lhs.clone());
        // Each reduced monomial holds at most one of g1, g2.
        for (m, _) in lhs.terms() {
            prop_assert!(m.exponent(Symbol::new("g1")) == 0 || m.exponent(Symbol::new("g2")) == 0);
        }
    }
}

#[test]
fn gauss_pairing_and_zero_residue() {
    let rules = GaussRules::new(3);
    let g1 = LaurentPoly::var(Symbol::new("g1"));
    let g2 = LaurentPoly::var(Symbol::new("g2"));
    assert_eq!(rules.reduce(&(&g1 * &g2)).to_string(), "u^2");
    assert_eq!(rules.g(3).to_string(), "-u^2");
    assert_eq!(rules.g(-1), g2);
    let even = GaussRules::new(2);
    assert_eq!(even.reduce(&g1.pow(2)).to_string(), "u^2");
    assert_eq!(even.reduce(&g1.pow(3)).to_string(), "g1*u^2");
}

#[test]
fn parse_examples() {
    let p = parse_poly("1 - u^2*z1*z2^-1", None).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(parse_poly("z1^3", None).unwrap(), LaurentPoly::var(Symbol::z(1)).pow(3));
    match parse_poly("1 + + z1", None) {
        Err(hecke::Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    let known = [Symbol::z(1)];
    assert!(matches!(parse_poly("z1 + w", Some(&known)), Err(hecke::Error::UnknownSymbol { .. })));
}

#[test]
fn division_by_zero_and_non_divisible() {
    let z1 = LaurentPoly::var(Symbol::z(1));
    let one = LaurentPoly::one();
    assert!(RationalFunction::from_fraction(one.clone(), LaurentPoly::zero()).is_err());
    assert!((&z1 + &one).exact_divide(&(&z1 - &one)).is_err());
}
