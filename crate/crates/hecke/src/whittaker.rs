//! Non-metaplectic instances: Demazure–Whittaker and Demazure–Lusztig
//! operators, the twisted group ring, and the Casselman–Shalika evaluation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{v_poly, Ctx, LaurentPoly, RationalFunction};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::roots::{neg, CartanDatum, Weight};
use crate::schema::SchemaInstance;

/// `(1 − v(wz)^{−α_i∨}) / (1 − (wz)^{α_i∨})` at every `(w, i)`.
pub fn whittaker_schema_instance(cartan: Arc<CartanDatum>) -> SchemaInstance {
    scalar_instance(cartan, "whittaker", -1)
}

/// `(1 − v(wz)^{α_i∨}) / (1 − (wz)^{α_i∨})` at every `(w, i)`.
pub fn spherical_schema_instance(cartan: Arc<CartanDatum>) -> SchemaInstance {
    scalar_instance(cartan, "spherical", 1)
}

fn scalar_instance(cartan: Arc<CartanDatum>, kind: &str, sign: i64) -> SchemaInstance {
    let name = format!("{kind} {}", cartan.cartan_type);
    let mut inst = SchemaInstance::new(name, cartan.clone(), 1, Ctx::plain());
    let c = cartan.clone();
    inst.fill(move |w, i| {
        let r = c.eval_at_w(w, &c.simple[i]);
        let one = LaurentPoly::one();
        let num = &one - &(&v_poly() * &c.zpow(&crate::roots::scale(sign, &r)));
        let den = &one - &c.zpow(&r);
        Matrix::scalar(1, &RationalFunction::from_fraction(num, den).expect("regular"))
    });
    inst
}

/// Which divided-difference operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemazureKind {
    /// `𝒯_i f = (1−v)/(x−1)·f + (v/x − 1)/(x−1)·f^{s_i}` (the modified action).
    Whittaker,
    /// `T_i f = (1−v)x/(1−x)·f + (1−vx)/(1−1/x)·f^{s_i}` (before conjugating by `z ↦ z⁻¹`).
    WhittakerUnconjugated,
    /// `T_i f = (f − f^{s_i})/(x−1) − v(f − x f^{s_i})/(x−1)`.
    Lusztig,
}

/// A Demazure-type operator family on functions of the torus.
#[derive(Clone, Debug)]
pub struct DemazureVariant {
    pub kind: DemazureKind,
    pub cartan: Arc<CartanDatum>,
}

impl DemazureVariant {
    pub fn new(kind: DemazureKind, cartan: Arc<CartanDatum>) -> Self {
        DemazureVariant { kind, cartan }
    }

    /// Polynomials `(a, b, d)` with `T_i f = (a f + b f^{s_i}) / d`.
    pub fn coefficients(&self, i: usize) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
        let c = &self.cartan;
        let x = c.zpow(&c.simple[i]);
        let xi = c.zpow(&neg(&c.simple[i]));
        let one = LaurentPoly::one();
        let vp = v_poly();
        match self.kind {
            DemazureKind::Whittaker => (&one - &vp, &(&vp * &xi) - &one, &x - &one),
            DemazureKind::Lusztig => (&one - &vp, &(&vp * &x) - &one, &x - &one),
            DemazureKind::WhittakerUnconjugated => {
                (&(&one - &vp) * &x, -&(&(&one - &(&vp * &x)) * &x), &one - &x)
            }
        }
    }

    /// `T_i f` for a Laurent polynomial; divisibility is enforced.
    pub fn apply_poly(&self, i: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        let (a, b, d) = self.coefficients(i);
        let fs = self.cartan.act_poly(self.cartan.weyl.from_word(&[i]), f);
        (&(&a * f) + &(&b * &fs)).exact_divide(&d)
    }

    /// `T_i f` for a rational function.
    pub fn apply(&self, i: usize, f: &RationalFunction) -> RationalFunction {
        if let Some(p) = f.as_poly() {
            if let Ok(q) = self.apply_poly(i, p) {
                return RationalFunction::from_poly(q);
            }
        }
        let (a, b, d) = self.coefficients(i);
        let fs = self.cartan.act_fn(self.cartan.weyl.from_word(&[i]), f);
        let num = &f.mul_poly(&a) + &fs.mul_poly(&b);
        &num / &RationalFunction::from_poly(d)
    }

    /// `T_w f` along the canonical reduced word of `w` (rightmost letter first).
    pub fn apply_word(&self, word: &[usize], f: &LaurentPoly) -> Result<LaurentPoly> {
        word.iter().rev().try_fold(f.clone(), |acc, &i| self.apply_poly(i, &acc))
    }

    /// `Σ_w T_w f`, sharing work through `T_{s_i w'} f = T_i(T_{w'} f)`.
    pub fn idempotent_apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        let g = &self.cartan.weyl;
        let mut by_len: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for w in 0..g.len() {
            by_len.entry(g.length(w)).or_default().push(w);
        }
        let mut values: HashMap<usize, LaurentPoly> = HashMap::new();
        values.insert(0, f.clone());
        for (&len, ws) in &by_len {
            if len == 0 {
                continue;
            }
            let layer: Vec<(usize, Result<LaurentPoly>)> = ws
                .par_iter()
                .map(|&w| {
                    let i = g.elements[w].word[0];
                    let prev = g.left_mul(i, w);
                    (w, self.apply_poly(i, &values[&prev]))
                })
                .collect();
            for (w, r) in layer {
                values.insert(w, r?);
            }
        }
        let mut acc = LaurentPoly::zero();
        for w in 0..g.len() {
            acc = &acc + &values[&w];
        }
        Ok(acc)
    }
}

/// `θ_λ f = z^{−λ} f` in the modified action.
pub fn modified_theta(cartan: &CartanDatum, lambda: &[i64], f: &RationalFunction) -> RationalFunction {
    f.mul_poly(&cartan.zpow(&neg(lambda)))
}

/// `Σ_w 𝒯_w z^λ` for the Demazure–Whittaker operators in the modified action.
pub fn idempotent_apply(cartan: Arc<CartanDatum>, lambda: &[i64]) -> Result<LaurentPoly> {
    if !cartan.is_dominant(lambda) {
        return Err(Error::Invalid(format!("weight {lambda:?} is not dominant")));
    }
    let f = cartan.zpow(lambda);
    DemazureVariant::new(DemazureKind::Whittaker, cartan).idempotent_apply(&f)
}

/// `∏_{α∨ > 0} (1 − v z^{−α∨}) · χ_λ(z)`.
pub fn cs_rhs(cartan: &CartanDatum, lambda: &[i64]) -> Result<LaurentPoly> {
    Ok(&cartan.positive_product(&v_poly(), -1) * &cartan.weyl_character(lambda)?)
}

/// An element `Σ_w f_w · w` of the twisted group ring, with `w f w⁻¹ = ^w f`.
#[derive(Clone, Debug)]
pub struct TwistedGroupElement {
    pub cartan: Arc<CartanDatum>,
    pub coeffs: BTreeMap<usize, RationalFunction>,
}

impl TwistedGroupElement {
    pub fn zero(cartan: Arc<CartanDatum>) -> Self {
        TwistedGroupElement { cartan, coeffs: BTreeMap::new() }
    }

    pub fn scalar(cartan: Arc<CartanDatum>, f: RationalFunction) -> Self {
        Self::term(cartan, f, 0)
    }

    pub fn term(cartan: Arc<CartanDatum>, f: RationalFunction, w: usize) -> Self {
        let mut e = Self::zero(cartan);
        if !f.is_zero() {
            e.coeffs.insert(w, f);
        }
        e
    }

    pub fn one(cartan: Arc<CartanDatum>) -> Self {
        Self::scalar(cartan, RationalFunction::one())
    }

    /// The group element `w` itself.
    pub fn group(cartan: Arc<CartanDatum>, w: usize) -> Self {
        Self::term(cartan, RationalFunction::one(), w)
    }

    pub fn coeff(&self, w: usize) -> RationalFunction {
        self.coeffs.get(&w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&w, f) in &other.coeffs {
            let s = &out.coeff(w) + f;
            if s.is_zero() {
                out.coeffs.remove(&w);
            } else {
                out.coeffs.insert(w, s);
            }
        }
        out
    }

    /// `(f·w)(g·y) = f·^w g·(wy)`.
    pub fn mul(&self, other: &Self) -> Self {
        let c = &self.cartan;
        let mut out = Self::zero(c.clone());
        for (&w, f) in &self.coeffs {
            for (&y, g) in &other.coeffs {
                let t = Self::term(c.clone(), f * &c.act_fn(w, g), c.weyl.mul(w, y));
                out = out.add(&t);
            }
        }
        out
    }

    /// The element acting on a function.
    pub fn act_on(&self, f: &RationalFunction) -> RationalFunction {
        let parts = self.coeffs.iter().map(|(&w, c)| c * &self.cartan.act_fn(w, f)).collect();
        crate::matrix::sum_balanced(parts)
    }

    /// `T_i` of the given variant as `(a/d)·1 + (b/d)·s_i`.
    pub fn generator(var: &DemazureVariant, i: usize) -> Self {
        let (a, b, d) = var.coefficients(i);
        let c = var.cartan.clone();
        let s = c.weyl.from_word(&[i]);
        let fa = RationalFunction::from_fraction(a, d.clone()).expect("nonzero");
        let fb = RationalFunction::from_fraction(b, d).expect("nonzero");
        Self::scalar(c.clone(), fa).add(&Self::term(c, fb, s))
    }

    /// `T_w` as a product of generators along the reduced word.
    pub fn to_element(var: &DemazureVariant, w: usize) -> Self {
        let c = var.cartan.clone();
        c.weyl.elements[w].word.iter().fold(Self::one(c.clone()), |acc, &i| acc.mul(&Self::generator(var, i)))
    }

    pub fn equals(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<usize> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter().all(|w| self.coeff(w) == other.coeff(w))
    }
}

/// `Σ_w 𝒯_w` in the twisted group ring.
pub fn spherical_element(var: &DemazureVariant) -> TwistedGroupElement {
    let c = var.cartan.clone();
    let mut acc = TwistedGroupElement::zero(c.clone());
    for w in 0..c.order() {
        acc = acc.add(&TwistedGroupElement::to_element(var, w));
    }
    acc
}

/// `∏_{α∨ > 0} (1 − v z^{−α∨}) / (1 − z^{α∨})`, the expected `w₀`-coefficient of `Σ_w 𝒯_w`.
pub fn longest_coefficient(cartan: &CartanDatum) -> RationalFunction {
    let one = LaurentPoly::one();
    let num = cartan.positive_product(&v_poly(), -1);
    let den = cartan.positive.iter().map(|b| (&one - &cartan.zpow(b), 1)).collect();
    RationalFunction::from_parts(num, den).expect("nonzero")
}

/// Exponent-bounded monomial basis `{z^λ : |λ_j| ≤ bound}`, restricted to `Λ`.
pub fn monomial_basis(cartan: &CartanDatum, bound: i64) -> Vec<Weight> {
    let d = cartan.dim;
    let mut out = Vec::new();
    let mut cur = vec![-bound; d];
    loop {
        if cartan.in_lattice(&cur) {
            out.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            if cur[k] < bound {
                cur[k] += 1;
                break;
            }
            cur[k] = -bound;
            k += 1;
        }
    }
}

/// `T_i² = (v−1)T_i + v` on one function.
pub fn quadratic_holds(var: &DemazureVariant, i: usize, f: &LaurentPoly) -> Result<bool> {
    let t1 = var.apply_poly(i, f)?;
    let t2 = var.apply_poly(i, &t1)?;
    let vp = v_poly();
    let rhs = &(&(&vp - &LaurentPoly::one()) * &t1) + &(&vp * f);
    Ok(t2 == rhs)
}

/// The braid relation for `(i, j)` on one function.
pub fn braid_holds(var: &DemazureVariant, i: usize, j: usize, f: &LaurentPoly) -> Result<bool> {
    let m = var.cartan.orders[i][j] as usize;
    let word = |a: usize, b: usize| -> Vec<usize> { (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect() };
    Ok(var.apply_word(&word(i, j), f)? == var.apply_word(&word(j, i), f)?)
}
