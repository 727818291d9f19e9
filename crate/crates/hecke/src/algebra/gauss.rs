//! Formal Gauss sums `g_a` (`a` mod n) and the rewrite rules they obey.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use super::monomial::Monomial;
use super::poly::{Coef, LaurentPoly};
use super::ratfun::RationalFunction;
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// Rewrite rules `g_a·g_{-a} → pair_value` (a ≢ 0) and `g_0 → zero_value`.
///
/// Monomials are brought to a normal form in which each residue pair
/// `{a, -a}` contributes at most one of `g_a`, `g_{-a}`, raised to a
/// nonnegative power (a self-paired residue contributes at most `g_a^1`).
/// Negative powers of Gauss symbols are rewritten through the pairing when
/// `pair_value` is a single term.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRules {
    n: u32,
    pair_value: LaurentPoly,
    zero_value: LaurentPoly,
    syms: Vec<Symbol>,
    index: HashMap<Symbol, u32>,
}

/// Name of the Gauss symbol for residue `a`.
pub fn gauss_name(a: u32) -> String {
    format!("g{a}")
}

/// Residue of `a` modulo `n` in `0..n`.
pub fn residue(a: i64, n: u32) -> u32 {
    a.rem_euclid(n as i64) as u32
}

impl GaussRules {
    /// Default normalization `g_a g_{-a} = u^2`, `g_0 = -u^2`.
    pub fn new(n: u32) -> Self {
        let v = LaurentPoly::var(Symbol::u()).pow(2);
        Self::with_values(n, v.clone(), -v)
    }

    pub fn with_values(n: u32, pair_value: LaurentPoly, zero_value: LaurentPoly) -> Self {
        assert!(n >= 1, "Gauss modulus must be positive");
        let syms: Vec<Symbol> = (0..n).map(|a| Symbol::new(&gauss_name(a))).collect();
        let index = syms.iter().enumerate().map(|(a, &s)| (s, a as u32)).collect();
        GaussRules { n, pair_value, zero_value, syms, index }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn pair_value(&self) -> &LaurentPoly {
        &self.pair_value
    }

    pub fn zero_value(&self) -> &LaurentPoly {
        &self.zero_value
    }

    /// The reduced value of `g(a)`.
    pub fn g(&self, a: i64) -> LaurentPoly {
        let r = residue(a, self.n);
        if r == 0 {
            self.zero_value.clone()
        } else {
            LaurentPoly::var(self.syms[r as usize])
        }
    }

    /// The reduced value of `g(a)^{-1}`.
    pub fn g_inv(&self, a: i64) -> Result<RationalFunction> {
        self.reduce_rf(&RationalFunction::from_poly(self.g(a)).inv()?)
    }

    fn is_gauss_name(name: &str) -> Option<u64> {
        let digits = name.strip_prefix('g')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse().ok()
    }

    /// Fails if `p` holds a Gauss symbol outside this modulus.
    pub fn check(&self, p: &LaurentPoly) -> Result<()> {
        for s in p.symbols() {
            if let Some(a) = Self::is_gauss_name(&s.name()) {
                if a >= self.n as u64 {
                    return Err(Error::ContextMismatch(format!("{s} is not a Gauss symbol modulo {}", self.n)));
                }
            }
        }
        Ok(())
    }

    fn reduce_term(&self, m: &Monomial, c: &Coef) -> LaurentPoly {
        let mut e = vec![0i32; self.n as usize];
        let mut rest = Vec::new();
        let mut touched = false;
        for &(s, k) in m.pairs() {
            match self.index.get(&s) {
                Some(&a) => {
                    e[a as usize] = k;
                    touched = true;
                }
                None => rest.push((s, k)),
            }
        }
        if !touched {
            return LaurentPoly::term(c.clone(), m.clone());
        }
        let pair_term = self.pair_value.as_term().map(|(m, c)| (m.clone(), c.clone()));
        let mut out = LaurentPoly::term(c.clone(), Monomial::from_pairs(rest));
        let mut pair_power: i32 = 0;
        let mut gauss: Vec<(Symbol, i32)> = Vec::new();
        let n = self.n as usize;
        for a in 1..n {
            let b = n - a;
            if a > b {
                continue;
            }
            if a == b {
                let k = e[a];
                let (q, r) = (k.div_euclid(2), k.rem_euclid(2));
                pair_power += q;
                if r != 0 {
                    gauss.push((self.syms[a], r));
                }
                continue;
            }
            let (ea, eb) = (e[a], e[b]);
            if pair_term.is_some() {
                // g_b = P / g_a, so the product is P^eb · g_a^(ea - eb).
                let d = ea - eb;
                if d >= 0 {
                    pair_power += eb;
                    if d > 0 {
                        gauss.push((self.syms[a], d));
                    }
                } else {
                    pair_power += ea;
                    gauss.push((self.syms[b], -d));
                }
            } else {
                let k = ea.min(eb).max(0);
                pair_power += k;
                for (idx, ex) in [(a, ea - k), (b, eb - k)] {
                    if ex != 0 {
                        gauss.push((self.syms[idx], ex));
                    }
                }
            }
        }
        out = out.mul_term(&Coef::one(), &Monomial::from_pairs(gauss));
        if pair_power != 0 {
            match &pair_term {
                Some((pm, pc)) => {
                    out = out.mul_term(&super::poly::pow_coef(pc, pair_power), &pm.pow(pair_power));
                }
                None => {
                    assert!(pair_power > 0, "negative pair power needs a monomial pair value");
                    out = &out * &self.pair_value.pow(pair_power as u32);
                }
            }
        }
        let k0 = e[0];
        if k0 != 0 {
            match self.zero_value.as_term() {
                Some((zm, zc)) => out = out.mul_term(&super::poly::pow_coef(zc, k0), &zm.pow(k0)),
                None if k0 > 0 => out = &out * &self.zero_value.pow(k0 as u32),
                None => out = out.mul_term(&Coef::one(), &Monomial::from_pairs([(self.syms[0], k0)])),
            }
        }
        out
    }

    /// Normal form of a Laurent polynomial.
    pub fn reduce(&self, p: &LaurentPoly) -> LaurentPoly {
        if !p.terms().iter().any(|(m, _)| m.symbols().any(|s| self.index.contains_key(&s))) {
            return p.clone();
        }
        LaurentPoly::from_terms(p.terms().iter().flat_map(|(m, c)| self.reduce_term(m, c).terms().to_vec()))
    }

    /// Reduces a rational function. Gauss symbols normally occur only in
    /// numerators; a factor holding them is inverted through the rules.
    pub fn reduce_rf(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let touches = |p: &LaurentPoly| p.terms().iter().any(|(m, _)| m.symbols().any(|s| self.index.contains_key(&s)));
        if f.denominator_factors().iter().any(|(g, _)| touches(g)) {
            // Bring Gauss symbols in a factor up by inverting the factor through the rules.
            let mut out = RationalFunction::from_poly(self.reduce(f.numerator()));
            for (g, m) in f.denominator_factors() {
                let g = self.reduce(g);
                let inv = match g.as_term() {
                    Some(_) => self.reduce_rf(&RationalFunction::from_poly(g).inv()?)?,
                    None => RationalFunction::from_poly(g).inv()?,
                };
                out = &out * &inv.pow(*m as i32)?;
                out = out.map_numerator(|p| self.reduce(p));
            }
            return Ok(out);
        }
        Ok(f.map_numerator(|p| self.reduce(p)))
    }
}

/// The arithmetic context: optional Gauss rules applied after each operation.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    gauss: Option<Arc<GaussRules>>,
}

impl Ctx {
    pub fn plain() -> Self {
        Ctx { gauss: None }
    }

    pub fn with_gauss(rules: GaussRules) -> Self {
        Ctx { gauss: Some(Arc::new(rules)) }
    }

    pub fn gauss(&self) -> Option<&GaussRules> {
        self.gauss.as_deref()
    }

    pub fn normalize(&self, f: RationalFunction) -> RationalFunction {
        match &self.gauss {
            Some(r) => r.reduce_rf(&f).expect("reduction of a valid function"),
            None => f,
        }
    }

    pub fn normalize_poly(&self, p: LaurentPoly) -> LaurentPoly {
        match &self.gauss {
            Some(r) => r.reduce(&p),
            None => p,
        }
    }

    /// Validates that every Gauss symbol of `p` belongs to this context.
    pub fn check(&self, p: &LaurentPoly) -> Result<()> {
        match &self.gauss {
            Some(r) => r.check(p),
            None => {
                if p.symbols().iter().any(|s| GaussRules::is_gauss_name(&s.name()).is_some()) {
                    Err(Error::ContextMismatch("Gauss symbol in a context without Gauss rules".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `a op b` for polynomials, with checks and rewriting.
    pub fn poly_arith(&self, a: &LaurentPoly, b: &LaurentPoly, op: PolyOp) -> Result<LaurentPoly> {
        self.check(a)?;
        self.check(b)?;
        let r = match op {
            PolyOp::Add => a + b,
            PolyOp::Sub => a - b,
            PolyOp::Mul => a * b,
        };
        Ok(self.normalize_poly(r))
    }

    pub fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        self.normalize(a * b)
    }

    /// Value equality modulo the Gauss relations.
    pub fn rf_equal(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        self.normalize(a - b).is_zero()
    }
}

/// Which Gauss symbol an index-dependent formula uses: `g(a)` or `g(-a)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GaussOrientation {
    #[default]
    Standard,
    Conjugate,
}

impl GaussOrientation {
    /// The index actually looked up for a nominal index `a`.
    pub fn index(self, a: i64) -> i64 {
        match self {
            GaussOrientation::Standard => a,
            GaussOrientation::Conjugate => -a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}
