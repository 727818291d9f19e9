use std::sync::Arc;

use hecke::algebra::{parse_poly, v_poly};
use hecke::roots::{neg, CartanDatum, CartanType};
use hecke::whittaker::{
    braid_holds, cs_rhs, idempotent_apply, longest_coefficient, modified_theta, monomial_basis, quadratic_holds,
    spherical_element, DemazureKind, DemazureVariant, TwistedGroupElement,
};
use hecke::{LaurentPoly, RationalFunction};
use proptest::prelude::*;

fn datum(t: CartanType) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::new(t).unwrap())
}

fn poly(s: &str) -> LaurentPoly {
    parse_poly(s, None).unwrap()
}

const RANK_TWO: [CartanType; 4] = [CartanType::A(2), CartanType::B2, CartanType::C2, CartanType::G2];

#[test]
fn casselman_shalika_small_cases_by_hand() {
    let a1 = datum(CartanType::A(1));
    assert_eq!(idempotent_apply(a1.clone(), &[0, 0]).unwrap(), poly("1 - u^2*z1^-1*z2"));
    let expected = &poly("1 - u^2*z1^-1*z2") * &poly("z1 + z2");
    assert_eq!(idempotent_apply(a1, &[1, 0]).unwrap(), expected);
    let a2 = datum(CartanType::A(2));
    let prod = &(&poly("1 - u^2*z1^-1*z2") * &poly("1 - u^2*z2^-1*z3")) * &poly("1 - u^2*z1^-1*z3");
    assert_eq!(idempotent_apply(a2, &[1, 0, 0]).unwrap(), &prod * &poly("z1 + z2 + z3"));
}

#[test]
fn casselman_shalika_on_dominant_boxes() {
    for t in [CartanType::A(1), CartanType::A(2), CartanType::C2] {
        let c = datum(t);
        let weights = c.dominant_in_box(2);
        assert!(weights.len() > 3, "{t}");
        for lambda in weights {
            assert_eq!(idempotent_apply(c.clone(), &lambda).unwrap(), cs_rhs(&c, &lambda).unwrap(), "{t} {lambda:?}");
        }
    }
    let g2 = datum(CartanType::G2);
    let mut weights = vec![vec![0; g2.dim]];
    weights.extend(g2.fundamental.iter().cloned());
    assert_eq!(weights.len(), 3);
    for lambda in weights {
        assert_eq!(idempotent_apply(g2.clone(), &lambda).unwrap(), cs_rhs(&g2, &lambda).unwrap(), "G2 {lambda:?}");
    }
}

#[test]
fn idempotent_requires_dominant_weight() {
    assert!(idempotent_apply(datum(CartanType::A(2)), &[0, 1, 0]).is_err());
}

#[test]
fn rho_is_antispherical_everywhere() {
    for t in [CartanType::A(1), CartanType::A(2), CartanType::A(3), CartanType::B2, CartanType::C2, CartanType::G2] {
        let c = datum(t);
        let un = DemazureVariant::new(DemazureKind::WhittakerUnconjugated, c.clone());
        let wh = DemazureVariant::new(DemazureKind::Whittaker, c.clone());
        let zr = c.zpow(&c.rho);
        let zmr = c.zpow(&neg(&c.rho));
        for i in 0..c.rank() {
            assert_eq!(un.apply_poly(i, &zr).unwrap(), -&zr, "{t} i={i}");
            assert_eq!(wh.apply_poly(i, &zmr).unwrap(), -&zmr, "{t} i={i}");
        }
    }
    let a1 = datum(CartanType::A(1));
    let un = DemazureVariant::new(DemazureKind::WhittakerUnconjugated, a1);
    assert_eq!(un.apply_poly(0, &poly("z1")).unwrap(), poly("-z1"));
}

#[test]
fn values_on_the_constant_function() {
    for t in RANK_TWO {
        let c = datum(t);
        let wh = DemazureVariant::new(DemazureKind::Whittaker, c.clone());
        let lu = DemazureVariant::new(DemazureKind::Lusztig, c.clone());
        for i in 0..c.rank() {
            let expected = &(-&v_poly()) * &c.zpow(&neg(&c.simple[i]));
            assert_eq!(wh.apply_poly(i, &LaurentPoly::one()).unwrap(), expected, "{t}");
            assert_eq!(lu.apply_poly(i, &LaurentPoly::one()).unwrap(), v_poly(), "{t}");
        }
    }
}

#[test]
fn demazure_relations_on_monomial_bases() {
    for t in RANK_TWO {
        let c = datum(t);
        let bound = if t == CartanType::G2 { 2 } else { 3 };
        let basis = monomial_basis(&c, bound);
        for kind in [DemazureKind::Whittaker, DemazureKind::Lusztig, DemazureKind::WhittakerUnconjugated] {
            let var = DemazureVariant::new(kind, c.clone());
            for mu in &basis {
                let f = c.zpow(mu);
                for i in 0..c.rank() {
                    assert!(quadratic_holds(&var, i, &f).unwrap(), "{t} {kind:?} quadratic {mu:?}");
                }
                assert!(braid_holds(&var, 0, 1, &f).unwrap(), "{t} {kind:?} braid {mu:?}");
            }
        }
    }
}

#[test]
fn modified_theta_is_multiplication_by_inverse_monomial() {
    let a1 = datum(CartanType::A(1));
    let one = RationalFunction::one();
    assert_eq!(modified_theta(&a1, &[0, 0], &one), one);
    assert_eq!(modified_theta(&a1, &[1, 0], &one).to_string(), "z1^-1");
    let f = RationalFunction::from_poly(poly("z1 + 3*z2"));
    let twice = modified_theta(&a1, &[1, -1], &modified_theta(&a1, &[0, 2], &f));
    assert_eq!(twice, modified_theta(&a1, &[1, 1], &f));
}

#[test]
fn twisted_ring_identities() {
    let c = datum(CartanType::A(2));
    let var = DemazureVariant::new(DemazureKind::Whittaker, c.clone());
    let one = TwistedGroupElement::one(c.clone());
    for i in 0..c.rank() {
        let s = c.weyl.from_word(&[i]);
        let t_plus = TwistedGroupElement::generator(&var, i).add(&one);
        let lhs = TwistedGroupElement::group(c.clone(), s).mul(&t_plus);
        let x = c.zpow(&c.simple[i]);
        let xi = c.zpow(&neg(&c.simple[i]));
        let ratio = RationalFunction::from_fraction(&LaurentPoly::one() - &(&v_poly() * &x), &LaurentPoly::one() - &(&v_poly() * &xi)).unwrap();
        let rhs = TwistedGroupElement::scalar(c.clone(), ratio).mul(&t_plus);
        assert!(lhs.equals(&rhs), "i={i}");
    }
    let total = spherical_element(&var);
    let w0 = c.weyl.longest();
    assert_eq!(total.coeff(w0), longest_coefficient(&c));

    // Normalizing by the inverse of the w0 coefficient's numerator product gives a W-invariant element.
    let norm = TwistedGroupElement::scalar(c.clone(), RationalFunction::from_poly(c.positive_product(&v_poly(), -1)).inv().unwrap());
    let tilde = norm.mul(&total);
    for w in 0..c.order() {
        assert!(TwistedGroupElement::group(c.clone(), w).mul(&tilde).equals(&tilde), "w={w}");
    }
}

#[test]
fn longest_coefficient_in_c2() {
    let c = datum(CartanType::C2);
    let var = DemazureVariant::new(DemazureKind::Whittaker, c.clone());
    assert_eq!(spherical_element(&var).coeff(c.weyl.longest()), longest_coefficient(&c));
}

fn random_weight() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn demazure_preserves_polynomials(mu in random_weight(), c2 in any::<bool>()) {
        let c = if c2 { datum(CartanType::C2) } else { datum(CartanType::A(2)) };
        let mu = &mu[..c.dim];
        let f = c.zpow(mu);
        for kind in [DemazureKind::Whittaker, DemazureKind::Lusztig] {
            let var = DemazureVariant::new(kind, c.clone());
            for i in 0..c.rank() {
                prop_assert!(var.apply_poly(i, &f).is_ok());
                prop_assert!(var.apply(i, &RationalFunction::from_poly(f.clone())).as_poly().is_some());
            }
        }
    }

    #[test]
    fn ring_elements_act_like_operators(mu in random_weight(), w in 0usize..6) {
        let c = datum(CartanType::A(2));
        let var = DemazureVariant::new(DemazureKind::Whittaker, c.clone());
        let f = c.zpow(&mu);
        let elt = TwistedGroupElement::to_element(&var, w);
        let by_ops = var.apply_word(&c.weyl.elements[w].word, &f).unwrap();
        prop_assert_eq!(elt.act_on(&RationalFunction::from_poly(f)), RationalFunction::from_poly(by_ops));
    }

    #[test]
    fn twisted_multiplication_is_associative(a in 0usize..6, b in 0usize..6, mu in random_weight()) {
        let c = datum(CartanType::A(2));
        let var = DemazureVariant::new(DemazureKind::Lusztig, c.clone());
        let x = TwistedGroupElement::to_element(&var, a);
        let y = TwistedGroupElement::term(c.clone(), RationalFunction::from_poly(c.zpow(&mu)), b);
        let z = TwistedGroupElement::generator(&var, 1);
        prop_assert!(x.mul(&y).mul(&z).equals(&x.mul(&y.mul(&z))));
    }
}
