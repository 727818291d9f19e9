use std::collections::BTreeSet;
use std::sync::Arc;

use hecke::algebra::{parse_poly, v, v_poly};
use hecke::matrix::Matrix;
use hecke::roots::{CartanDatum, CartanType};
use hecke::schema::{generic_instance, poincare_rf, SchemaInstance};
use hecke::whittaker::{spherical_schema_instance, whittaker_schema_instance};
use hecke::{LaurentPoly, RationalFunction, Symbol};

fn datum(t: CartanType) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::new(t).unwrap())
}

fn rf(s: &str) -> RationalFunction {
    RationalFunction::from_poly(parse_poly(s, None).unwrap())
}

fn frac(num: &str, den: &str) -> RationalFunction {
    RationalFunction::from_fraction(parse_poly(num, None).unwrap(), parse_poly(den, None).unwrap()).unwrap()
}

#[test]
fn generic_rank_two_instances_satisfy_relations() {
    for t in [CartanType::A(2), CartanType::C2, CartanType::G2] {
        let inst = generic_instance(datum(t)).unwrap();
        let r = inst.check_relations();
        assert_eq!(r.checks.len(), 3, "{t}");
        assert!(r.passed(), "{}", r.to_text());
        assert!(inst.check_composition().passed, "{t}");
    }
}

#[test]
fn generic_instances_reject_other_types() {
    assert!(generic_instance(datum(CartanType::A(3))).is_err());
    assert!(generic_instance(datum(CartanType::B2)).is_err());
}

fn a_symbols(inst: &SchemaInstance) -> BTreeSet<String> {
    inst.a
        .values()
        .flat_map(|m| m.get(0, 0).symbols())
        .map(|s| s.to_string())
        .filter(|s| s.starts_with('a'))
        .collect()
}

#[test]
fn generic_a2_eliminates_the_top_cell_symbol() {
    let c = datum(CartanType::A(2));
    let inst = generic_instance(c.clone()).unwrap();
    let syms = a_symbols(&inst);
    // Six descents in total; one of them is expressed through the others.
    assert_eq!(syms.len(), 5, "{syms:?}");
    assert!(!syms.contains("a2_121"));
    let w0 = c.weyl.from_word(&[0, 1, 0]);
    assert_eq!(inst.a[&(w0, 1)].get(0, 0), rf("a1_121*a2_21*a1_1*a1_12^-1*a2_2^-1"));
    let g2 = generic_instance(datum(CartanType::G2)).unwrap();
    assert!(!a_symbols(&g2).contains("a2_212121"));
}

/// The block matrix of `𝔗_1` assembled entry by entry from the generic data.
fn t1_oracle(inst: &SchemaInstance) -> Matrix {
    let c = &inst.cartan;
    let n = c.order();
    let mut m = Matrix::zeros(n, n);
    for w in 0..n {
        let ws = c.weyl.mul(c.weyl.from_word(&[0]), w);
        let wa = c.act(c.weyl.inverse(w), &c.simple[0]);
        let x = c.zpow(&wa);
        let one = LaurentPoly::one();
        m.set(w, w, RationalFunction::from_fraction(&(&one - &v_poly()) * &x, &one - &x).unwrap());
        m.set(w, ws, inst.a[&(ws, 0)].get(0, 0));
    }
    m
}

#[test]
fn generic_a2_t1_matches_entrywise_construction() {
    let inst = generic_instance(datum(CartanType::A(2))).unwrap();
    let t1 = inst.build_t(0).unwrap();
    assert!(t1.equals(&t1_oracle(&inst), &inst.ctx));
    assert_eq!(t1.nnz(), 12);
    assert!(inst.check_sparsity(0).passed && inst.check_sparsity(1).passed);
}

#[test]
fn whittaker_a1_block_matrix() {
    let inst = whittaker_schema_instance(datum(CartanType::A(1)));
    let t = inst.build_t(0).unwrap();
    assert_eq!(t.get(0, 0), frac("z1*z2^-1 - u^2*z1*z2^-1", "1 - z1*z2^-1"));
    assert_eq!(t.get(1, 1), frac("z1^-1*z2 - u^2*z1^-1*z2", "1 - z1^-1*z2"));
    // Block (w, s_1w) carries the intertwiner attached to s_1w.
    assert_eq!(t.get(1, 0), frac("1 - u^2*z1^-1*z2", "1 - z1*z2^-1"));
    assert_eq!(t.get(0, 1), frac("1 - u^2*z1*z2^-1", "1 - z1^-1*z2"));
    // 𝔗 + 1 has the same off-diagonal part; its diagonal is D + 1.
    let plus = t.add(&Matrix::identity(2), &inst.ctx);
    assert_eq!(plus.get(0, 0), frac("1 - u^2*z1*z2^-1", "1 - z1*z2^-1"));
}

#[test]
fn d_coefficients_pair_to_v_minus_one() {
    for t in [CartanType::A(2), CartanType::C2, CartanType::G2] {
        let inst = whittaker_schema_instance(datum(t));
        let g = &inst.cartan.weyl;
        for w in 0..g.len() {
            for i in 0..inst.cartan.rank() {
                let s = &inst.d_coefficient(w, i) + &inst.d_coefficient(g.left_mul(i, w), i);
                assert_eq!(s, &v() - &RationalFunction::one(), "{t} w={w} i={i}");
            }
        }
    }
}

#[test]
fn theta_operators() {
    let inst = whittaker_schema_instance(datum(CartanType::A(1)));
    assert!(inst.build_theta(&[0, 0]).equals(&Matrix::identity(2), &inst.ctx));
    let th = inst.build_theta(&[1, 0]);
    assert_eq!(th.get(0, 0), rf("z1"));
    assert_eq!(th.get(1, 1), rf("z2"));
    let back = th.mul(&inst.build_theta(&[-1, 0]), &inst.ctx);
    assert!(back.equals(&Matrix::identity(2), &inst.ctx));
    let a2 = whittaker_schema_instance(datum(CartanType::A(2)));
    assert!(a2.check_theta(&[1, 0, -2], &[0, 3, 1]).passed);
}

#[test]
fn bernstein_relation_on_lattice_bases() {
    let a1 = whittaker_schema_instance(datum(CartanType::A(1)));
    for lambda in [[0, 0], [1, 0], [0, 1], [2, -1]] {
        assert!(a1.check_bernstein(&lambda, 0).passed, "{lambda:?}");
    }
    let gen = generic_instance(datum(CartanType::A(2))).unwrap();
    for lambda in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        for i in 0..2 {
            let c = gen.check_bernstein(&lambda, i);
            assert!(c.passed, "{c:?}");
        }
    }
    for t in [CartanType::C2, CartanType::G2] {
        let c = datum(t);
        let sph = spherical_schema_instance(c.clone());
        let r = sph.verify(&c.lattice_basis);
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn products_along_words_and_the_spherical_sum() {
    let a1 = whittaker_schema_instance(datum(CartanType::A(1)));
    assert!(a1.apply_tw(0).unwrap().equals(&Matrix::identity(2), &a1.ctx));
    let expected = a1.build_t(0).unwrap().add(&Matrix::identity(2), &a1.ctx);
    assert!(a1.spherical_sum().unwrap().equals(&expected, &a1.ctx));

    let a2 = whittaker_schema_instance(datum(CartanType::A(2)));
    assert_eq!(poincare_rf(&a2.cartan), rf("1 + 2*u^2 + 2*u^4 + u^6"));
    assert!(a2.check_idempotent().passed);
    let w0 = a2.cartan.weyl.longest();
    let via_words = a2.build_t(0).unwrap().mul(&a2.build_t(1).unwrap(), &a2.ctx).mul(&a2.build_t(0).unwrap(), &a2.ctx);
    assert!(a2.apply_tw(w0).unwrap().equals(&via_words, &a2.ctx));
}

#[test]
fn spherical_instance_fixes_the_trivial_vector() {
    // The constant vector (1, …, 1) spans the trivial module: 𝔗_i acts by v.
    for t in [CartanType::A(2), CartanType::C2] {
        let inst = spherical_schema_instance(datum(t));
        let ones = vec![RationalFunction::one(); inst.dim()];
        for i in 0..inst.cartan.rank() {
            let out = inst.build_t(i).unwrap().mul_vec(&ones, &inst.ctx);
            assert!(out.iter().all(|e| *e == v()), "{t}");
        }
        let sum = inst.spherical_sum().unwrap().mul_vec(&ones, &inst.ctx);
        assert!(sum.iter().all(|e| *e == poincare_rf(&inst.cartan)));
    }
}

#[test]
fn perturbations_are_detected_and_localized() {
    let c = datum(CartanType::A(2));
    let inst = whittaker_schema_instance(c.clone());
    let s1 = c.weyl.from_word(&[0]);
    let doubled = inst.perturbed(s1, 0, &RationalFunction::int(2));
    let q = doubled.check_quadratic(0);
    assert!(!q.passed);
    assert!(q.failure.unwrap().location.starts_with("block"));
    assert!(!doubled.check_composition().passed);

    let gen = generic_instance(c.clone()).unwrap();
    let s12 = c.weyl.from_word(&[0, 1]);
    let free = gen.with_free_entry(s12, 0, "b");
    assert!(!free.check_braid(0, 1).passed);
    assert!(free.a[&(s12, 0)].get(0, 0).symbols().contains(&Symbol::new("b")));
}

#[test]
fn missing_entries_are_reported() {
    let c = datum(CartanType::A(1));
    let mut inst = whittaker_schema_instance(c.clone());
    inst.a.remove(&(0, 0));
    assert!(inst.build_t(0).is_err());
    assert!(!inst.check_quadratic(0).passed);
    assert!(!inst.check_composition().passed);
}

#[test]
fn reports_round_trip_through_json() {
    let c = Arc::new(CartanDatum::new(CartanType::A(2)).unwrap());
    let inst = whittaker_schema_instance(c.clone());
    let s1 = c.weyl.from_word(&[0]);
    for rep in [inst.verify(&c.lattice_basis), inst.perturbed(s1, 0, &RationalFunction::int(2)).verify(&c.lattice_basis)] {
        let json = serde_json::to_string(&rep).unwrap();
        let back: hecke::Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["status"], if rep.passed() { "pass" } else { "fail" });
        // A failing report always carries a located first failure.
        if !rep.passed() {
            assert!(!rep.first_failure().unwrap().1.location.is_empty());
        }
    }
}
