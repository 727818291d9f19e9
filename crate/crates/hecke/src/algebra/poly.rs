//! Multivariate Laurent polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::symbol::Symbol;
use crate::error::{Error, Result};

pub type Coef = BigRational;

/// Shorthand for an integer coefficient.
pub fn int(n: i64) -> Coef {
    Coef::from_integer(BigInt::from(n))
}

/// Shorthand for the rational coefficient `p/q`.
pub fn ratio(p: i64, q: i64) -> Coef {
    Coef::new(BigInt::from(p), BigInt::from(q))
}

/// A Laurent polynomial: terms sorted by decreasing [`Monomial`] order with
/// nonzero coefficients. The first term is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Coef)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coef::one())
    }

    pub fn constant(c: Coef) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn term(c: Coef, m: Monomial) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Coef::one(), m)
    }

    pub fn var(s: Symbol) -> Self {
        Self::monomial(Monomial::var(s))
    }

    /// `z^μ` in the given coordinates.
    pub fn z_pow(syms: &[Symbol], mu: &[i64]) -> Self {
        Self::monomial(Monomial::from_exponents(syms, mu))
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coef)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, Coef> = HashMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Coef::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Coef>) -> Self {
        let mut terms: Vec<(Monomial, Coef)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&(Monomial, Coef)> {
        self.terms.first()
    }

    /// The constant coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Coef> {
        match self.terms.as_slice() {
            [] => Some(Coef::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// The single term if the polynomial is `c·m`.
    pub fn as_term(&self) -> Option<(&Monomial, &Coef)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.iter().flat_map(|t| t.0.symbols()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Coef) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    /// Multiplies by `c·m`; the term order is preserved.
    pub fn mul_term(&self, c: &Coef, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    fn merge(&self, other: &Self, sign: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if sign { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if sign { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        LaurentPoly { terms: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides `self` by `q` exactly.
    ///
    /// Uses leading-term division. A Laurent quotient `r` with `r·q = p` must
    /// satisfy `deg_s r = deg_s p − deg_s q` for the minimal and maximal degree
    /// in every symbol `s`, so any candidate quotient term outside that box
    /// proves non-divisibility and guarantees termination.
    pub fn exact_divide(&self, q: &LaurentPoly) -> Result<LaurentPoly> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((m, c)) = q.as_term() {
            let ci = c.recip();
            return Ok(self.mul_term(&ci, &m.inv()));
        }
        let bp = degree_box(self);
        let bq = degree_box(q);
        let mut bounds: BTreeMap<Symbol, (i32, i32)> = BTreeMap::new();
        for (s, &(plo, phi)) in &bp {
            let (qlo, qhi) = bq.get(s).copied().unwrap_or((0, 0));
            let (lo, hi) = (plo - qlo, phi - qhi);
            if lo > hi {
                return Err(Error::NotDivisible);
            }
            bounds.insert(*s, (lo, hi));
        }
        for (s, &(qlo, qhi)) in &bq {
            if !bp.contains_key(s) {
                let (lo, hi) = (-qlo, -qhi);
                if lo > hi {
                    return Err(Error::NotDivisible);
                }
                bounds.insert(*s, (lo, hi));
            }
        }
        let (lm, lc) = q.leading().expect("nonzero");
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Coef)> = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let tm = rm.div(lm);
            for (s, &(lo, hi)) in &bounds {
                let e = tm.exponent(*s);
                if e < lo || e > hi {
                    return Err(Error::NotDivisible);
                }
            }
            if tm.symbols().any(|s| !bounds.contains_key(&s)) {
                return Err(Error::NotDivisible);
            }
            let tc = rc * &lc_inv;
            rem = rem.merge(&q.mul_term(&tc, &tm), true);
            quot.push((tm, tc));
        }
        // Quotient terms were produced in strictly decreasing order.
        Ok(LaurentPoly { terms: quot })
    }

    /// Applies `z^μ ↦ z^{Mμ}` on the designated coordinates; other symbols are fixed.
    ///
    /// `matrix` is square of size `syms.len()` and acts on column vectors.
    pub fn substitute(&self, syms: &[Symbol], matrix: &[Vec<i64>]) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (substitute_monomial(m, syms, matrix), c.clone())))
    }

    /// Replaces each symbol by a Laurent monomial.
    pub fn substitute_monomials(&self, map: &HashMap<Symbol, Monomial>) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one();
            for &(s, e) in m.pairs() {
                match map.get(&s) {
                    Some(img) => out = out.mul(&img.pow(e)),
                    None => out = out.mul(&Monomial::from_pairs([(s, e)])),
                }
            }
            (out, c.clone())
        }))
    }

    /// Replaces one symbol by a polynomial (the exponent of `s` must be
    /// nonnegative in every term).
    pub fn substitute_poly(&self, s: Symbol, value: &LaurentPoly) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(s);
            if e < 0 {
                return Err(Error::Invalid(format!("negative power of {s} cannot take a polynomial value")));
            }
            acc = &acc + &value.pow(e as u32).mul_term(c, &rest);
        }
        Ok(acc)
    }

    /// Exact evaluation; every symbol must be assigned, and a symbol with a
    /// zero value must not appear with negative exponent.
    pub fn eval(&self, point: &HashMap<Symbol, Coef>) -> Result<Coef> {
        let mut acc = Coef::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.pairs() {
                let (x, e) = match point.get(&s) {
                    Some(x) => (x, e),
                    // An even power of u can be evaluated from a value of v = u^2.
                    None if s == Symbol::u() && e % 2 == 0 => match point.get(&Symbol::new("v")) {
                        Some(x) => (x, e / 2),
                        None => return Err(Error::Unassigned(s.name().to_string())),
                    },
                    None => return Err(Error::Unassigned(s.name().to_string())),
                };
                if x.is_zero() && e < 0 {
                    return Err(Error::Pole);
                }
                t *= pow_coef(x, e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Minimal and maximal exponent of each symbol that occurs.
    pub fn degree_box(&self) -> BTreeMap<Symbol, (i32, i32)> {
        degree_box(self)
    }

    /// Sum of `|c|` over the terms (a cheap size measure for reports).
    pub fn height(&self) -> Coef {
        self.terms.iter().map(|t| t.1.abs()).fold(Coef::zero(), |a, b| a + b)
    }

    /// Canonical rendering order: ascending total degree, then by the
    /// name-sorted factor list.
    fn display_order(&self) -> Vec<&(Monomial, Coef)> {
        let mut v: Vec<(i64, Vec<(std::sync::Arc<str>, i32)>, &(Monomial, Coef))> = self
            .terms
            .iter()
            .map(|t| {
                let mut named: Vec<_> = t.0.pairs().iter().map(|&(s, e)| (s.name(), e)).collect();
                named.sort();
                (t.0.total_degree(), named, t)
            })
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        v.into_iter().map(|x| x.2).collect()
    }
}

pub(crate) fn pow_coef(x: &Coef, e: i32) -> Coef {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow::pow(base, e.unsigned_abs() as usize)
}

fn degree_box(p: &LaurentPoly) -> BTreeMap<Symbol, (i32, i32)> {
    let mut b: BTreeMap<Symbol, (i32, i32)> = BTreeMap::new();
    let syms = p.symbols();
    for s in &syms {
        b.insert(*s, (i32::MAX, i32::MIN));
    }
    for (m, _) in &p.terms {
        for s in &syms {
            let e = m.exponent(*s);
            let entry = b.get_mut(s).expect("present");
            entry.0 = entry.0.min(e);
            entry.1 = entry.1.max(e);
        }
    }
    b
}

pub(crate) fn substitute_monomial(m: &Monomial, syms: &[Symbol], matrix: &[Vec<i64>]) -> Monomial {
    let d = syms.len();
    let mu: Vec<i64> = syms.iter().map(|&s| m.exponent(s) as i64).collect();
    if mu.iter().all(|&e| e == 0) {
        return m.clone();
    }
    let mut pairs: Vec<(Symbol, i32)> =
        m.pairs().iter().copied().filter(|(s, _)| !syms.contains(s)).collect();
    for (i, &s) in syms.iter().enumerate() {
        let e: i64 = (0..d).map(|j| matrix[i][j] * mu[j]).sum();
        pairs.push((s, i32::try_from(e).expect("exponent overflow")));
    }
    Monomial::from_pairs(pairs)
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((m, c)) = rhs.as_term() {
            return self.mul_term(c, m);
        }
        if let Some((m, c)) = self.as_term() {
            return rhs.mul_term(c, m);
        }
        let mut acc: HashMap<Monomial, Coef> = HashMap::with_capacity(self.len() * rhs.len());
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                let k = m.mul(n);
                let v = c * d;
                match acc.get_mut(&k) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(k, v);
                    }
                }
            }
        }
        LaurentPoly::from_map(acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
