//! Rational functions with factored denominators.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::{Coef, LaurentPoly};
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// A quotient `num / ∏ f^m` of Laurent polynomials.
///
/// Each denominator factor is normalized to have leading term `1`, so
/// associated factors (which differ by a unit `c·z^μ`) are stored once. Units
/// and monomial denominators are absorbed into the numerator. A factor is
/// cancelled whenever it divides the numerator exactly; no gcd is computed, so
/// the representation is not canonical, but [`PartialEq`] compares values.
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

/// Normalizes `q` to leading term `1`, returning the removed unit.
fn normalize_factor(q: &LaurentPoly) -> (LaurentPoly, Coef, Monomial) {
    let (m, c) = q.leading().expect("nonzero factor").clone();
    let p = q.mul_term(&c.recip(), &m.inv());
    (p, c, m)
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::int(n))
    }

    pub fn constant(c: Coef) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(LaurentPoly::var(s))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(LaurentPoly::monomial(m))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: Vec::new() }
    }

    /// `p / q`, with `q` stored as a single factor after cancellation.
    pub fn from_fraction(p: LaurentPoly, q: LaurentPoly) -> Result<Self> {
        Self::from_parts(p, vec![(q, 1)])
    }

    /// Builds `num / ∏ f^m`, normalizing and cancelling factors.
    pub fn from_parts(num: LaurentPoly, den: Vec<(LaurentPoly, u32)>) -> Result<Self> {
        let mut num = num;
        let mut acc: Vec<(LaurentPoly, u32)> = Vec::new();
        for (q, m) in den {
            if m == 0 {
                continue;
            }
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let (p, c, mono) = normalize_factor(&q);
            let unit_inv = Coef::one() / num_traits::pow::pow(c, m as usize);
            num = num.mul_term(&unit_inv, &mono.pow(-(m as i32)));
            if p.is_one() {
                continue;
            }
            push_factor(&mut acc, p, m);
        }
        let mut f = RationalFunction { num, den: acc };
        f.cancel_all();
        Ok(f)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one();
        for (f, m) in &self.den {
            d = &d * &f.pow(*m);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// The Laurent polynomial this function equals, if its representation has
    /// no denominator left.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Like [`as_poly`](Self::as_poly) but attempts a final exact division.
    pub fn to_poly(&self) -> Result<LaurentPoly> {
        if self.den.is_empty() {
            return Ok(self.num.clone());
        }
        self.num.exact_divide(&self.denominator())
    }

    pub fn as_constant(&self) -> Option<Coef> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        for (f, _) in &self.den {
            v.extend(f.symbols());
        }
        v.sort();
        v.dedup();
        v
    }

    fn cancel_all(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut k = 0;
        while k < self.den.len() {
            while self.den[k].1 > 0 {
                match self.num.exact_divide(&self.den[k].0) {
                    Ok(q) => {
                        self.num = q;
                        self.den[k].1 -= 1;
                    }
                    Err(_) => break,
                }
            }
            if self.den[k].1 == 0 {
                self.den.remove(k);
            } else {
                k += 1;
            }
        }
    }

    /// Multiplies by a Laurent polynomial, cancelling where possible.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        if p.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = p.as_term() {
            return RationalFunction { num: self.num.mul_term(c, m), den: self.den.clone() };
        }
        let mut p = p.clone();
        let mut den = self.den.clone();
        cancel_against(&mut p, &mut den);
        RationalFunction { num: &self.num * &p, den }
    }

    pub fn scale(&self, c: &Coef) -> Self {
        RationalFunction { num: self.num.scale(c), den: if c.is_zero() { Vec::new() } else { self.den.clone() } }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        RationalFunction { num: self.num.mul_term(&Coef::one(), m), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = LaurentPoly::one();
        for (f, m) in &self.den {
            num = &num * &f.pow(*m);
        }
        Self::from_parts(num, vec![(self.num.clone(), 1)])
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.iter().map(|(f, m)| (f.clone(), m * e)).collect(),
        })
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if subtract { -other } else { other.clone() };
        }
        if self.den.is_empty() && other.den.is_empty() {
            let num = if subtract { &self.num - &other.num } else { &self.num + &other.num };
            return Self::from_poly(num);
        }
        // Least common multiple of the two factor multisets.
        let mut lcm: Vec<(LaurentPoly, u32)> = self.den.clone();
        for (f, m) in &other.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*m),
                None => {
                    let pos = lcm.partition_point(|(g, _)| g < f);
                    lcm.insert(pos, (f.clone(), *m));
                }
            }
        }
        let a = self.num.clone() * cofactor(&lcm, &self.den);
        let b = other.num.clone() * cofactor(&lcm, &other.den);
        let num = if subtract { &a - &b } else { &a + &b };
        let mut f = RationalFunction { num, den: lcm };
        f.cancel_all();
        f
    }

    /// Applies `z^μ ↦ z^{Mμ}` on the given coordinates.
    pub fn substitute(&self, syms: &[Symbol], matrix: &[Vec<i64>]) -> Self {
        let num = self.num.substitute(syms, matrix);
        let den = self.den.iter().map(|(f, m)| (f.substitute(syms, matrix), *m)).collect();
        Self::from_parts(num, den).expect("substitution by an invertible map keeps factors nonzero")
    }

    /// Replaces symbols by Laurent monomials.
    pub fn substitute_monomials(&self, map: &HashMap<Symbol, Monomial>) -> Result<Self> {
        let num = self.num.substitute_monomials(map);
        let den = self.den.iter().map(|(f, m)| (f.substitute_monomials(map), *m)).collect();
        Self::from_parts(num, den)
    }

    /// Replaces a symbol by a rational function.
    pub fn substitute_rf(&self, s: Symbol, value: &RationalFunction) -> Result<Self> {
        let sub = |p: &LaurentPoly| -> Result<RationalFunction> {
            let mut acc = RationalFunction::zero();
            for (m, c) in p.terms() {
                let (rest, e) = m.split_off(s);
                let t = value.pow(e)?.mul_poly(&LaurentPoly::term(c.clone(), rest));
                acc = &acc + &t;
            }
            Ok(acc)
        };
        let mut out = sub(&self.num)?;
        for (f, m) in &self.den {
            out = out.checked_div(&sub(f)?.pow(*m as i32)?)?;
        }
        Ok(out)
    }

    /// The limit as `t → 0`, where `t` is a symbol; errors on a pole.
    pub fn limit_at_zero(&self, t: Symbol) -> Result<Self> {
        let lowest = |p: &LaurentPoly| -> (i32, LaurentPoly) {
            let v = p.terms().iter().map(|(m, _)| m.exponent(t)).min().unwrap_or(0);
            let part = LaurentPoly::from_terms(
                p.terms().iter().filter(|(m, _)| m.exponent(t) == v).map(|(m, c)| (m.split_off(t).0, c.clone())),
            );
            (v, part)
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (mut val, num) = lowest(&self.num);
        let mut den = Vec::new();
        for (f, m) in &self.den {
            let (v, part) = lowest(f);
            val -= v * (*m as i32);
            den.push((part, *m));
        }
        match val.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(Self::zero()),
            std::cmp::Ordering::Equal => Self::from_parts(num, den),
            std::cmp::Ordering::Less => Err(Error::Pole),
        }
    }

    /// Exact evaluation; fails with [`Error::Pole`] if a denominator factor vanishes.
    pub fn eval(&self, point: &HashMap<Symbol, Coef>) -> Result<Coef> {
        let mut val = self.num.eval(point)?;
        for (f, m) in &self.den {
            let d = f.eval(point)?;
            if d.is_zero() {
                return Err(Error::Pole);
            }
            val /= num_traits::pow::pow(d, *m as usize);
        }
        Ok(val)
    }

    /// Applies a map to the numerator only (used for rewriting by relations
    /// that do not involve denominator symbols).
    pub fn map_numerator(&self, f: impl FnOnce(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = RationalFunction { num: f(&self.num), den: self.den.clone() };
        out.cancel_all();
        out
    }
}

fn push_factor(acc: &mut Vec<(LaurentPoly, u32)>, p: LaurentPoly, m: u32) {
    match acc.iter_mut().find(|(g, _)| *g == p) {
        Some(slot) => slot.1 += m,
        None => {
            let pos = acc.partition_point(|(g, _)| *g < p);
            acc.insert(pos, (p, m));
        }
    }
}

/// `∏ lcm / ∏ part`, both given as factor multisets with `part ⊆ lcm`.
fn cofactor(lcm: &[(LaurentPoly, u32)], part: &[(LaurentPoly, u32)]) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for (f, m) in lcm {
        let have = part.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
        if *m > have {
            out = &out * &f.pow(m - have);
        }
    }
    out
}

/// Divides `p` by as many factors of `den` as possible, removing them.
fn cancel_against(p: &mut LaurentPoly, den: &mut Vec<(LaurentPoly, u32)>) {
    let mut k = 0;
    while k < den.len() {
        while den[k].1 > 0 {
            match p.exact_divide(&den[k].0) {
                Ok(q) => {
                    *p = q;
                    den[k].1 -= 1;
                }
                Err(_) => break,
            }
        }
        if den[k].1 == 0 {
            den.remove(k);
        } else {
            k += 1;
        }
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl PartialEq for RationalFunction {
    /// Value equality: `a = b` iff `a.num·∏b.den = b.num·∏a.den`.
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (self - other).is_zero()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, true)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if rhs.den.is_empty() {
            return self.mul_poly(&rhs.num);
        }
        if self.den.is_empty() {
            return rhs.mul_poly(&self.num);
        }
        let mut a = self.num.clone();
        let mut b = rhs.num.clone();
        let mut da = self.den.clone();
        let mut db = rhs.den.clone();
        cancel_against(&mut a, &mut db);
        cancel_against(&mut b, &mut da);
        for (f, m) in db {
            push_factor(&mut da, f, m);
        }
        RationalFunction { num: &a * &b, den: da }
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`] otherwise.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/(")?;
        for (k, (g, m)) in self.den.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *m == 1 {
                write!(f, "({g})")?;
            } else {
                write!(f, "({g})^{m}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::ratio;

    fn x() -> LaurentPoly {
        LaurentPoly::var(Symbol::new("x"))
    }

    #[test]
    fn cancellation_on_construction() {
        let one = LaurentPoly::one();
        let f = RationalFunction::from_fraction(&one - &x().pow(2), &one - &x()).unwrap();
        assert_eq!(f.as_poly(), Some(&(&one + &x())));
        let g = RationalFunction::from_fraction(x().pow(2), x()).unwrap();
        assert_eq!(g, RationalFunction::from_poly(x()));
    }

    #[test]
    fn associated_factors_merge() {
        let one = LaurentPoly::one();
        let y = LaurentPoly::var(Symbol::new("y"));
        let a = RationalFunction::from_fraction(one.clone(), &x() - &y).unwrap();
        let b = RationalFunction::from_fraction(one.clone(), &y - &x()).unwrap();
        assert!((&a + &b).is_zero());
        assert_eq!(a.denominator_factors().len(), 1);
    }

    #[test]
    fn eval_and_pole() {
        let one = LaurentPoly::one();
        let v = LaurentPoly::var(Symbol::new("v"));
        let f = RationalFunction::from_fraction(&one - &(&v * &x()), &one - &x()).unwrap();
        let mut pt = HashMap::new();
        pt.insert(Symbol::new("v"), ratio(1, 2));
        pt.insert(Symbol::new("x"), ratio(2, 1));
        assert_eq!(f.eval(&pt).unwrap(), ratio(0, 1));
        pt.insert(Symbol::new("x"), ratio(1, 1));
        assert_eq!(f.eval(&pt), Err(Error::Pole));
    }

    #[test]
    fn limit_picks_lowest_order() {
        let t = Symbol::new("t_lim");
        let tp = LaurentPoly::var(t);
        let one = LaurentPoly::one();
        // (1 + t) / (2 + t) -> 1/2 ; t/(1+t) -> 0 ; 1/t -> pole
        let f = RationalFunction::from_fraction(&one + &tp, &LaurentPoly::int(2) + &tp).unwrap();
        assert_eq!(f.limit_at_zero(t).unwrap(), RationalFunction::constant(ratio(1, 2)));
        let g = RationalFunction::from_fraction(tp.clone(), &one + &tp).unwrap();
        assert!(g.limit_at_zero(t).unwrap().is_zero());
        let h = RationalFunction::from_fraction(one.clone(), &tp + &(&tp * &tp)).unwrap();
        assert_eq!(h.limit_at_zero(t), Err(Error::Pole));
    }
}
