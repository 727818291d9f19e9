//! Laurent monomials: finitely supported maps from symbols to integers.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::symbol::Symbol;

/// A Laurent monomial `∏ s^e`, stored as `(symbol, exponent)` pairs sorted by
/// symbol id. Zero exponents are never stored.
///
/// `Ord` is the lexicographic order on exponent vectors (symbols taken in id
/// order). It is a total order compatible with multiplication, which is what
/// leading-term division needs; it is *not* the rendering order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub(crate) exps: SmallVec<[(Symbol, i32); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(s: Symbol) -> Monomial {
        Monomial::from_pairs([(s, 1)])
    }

    /// Builds a monomial from arbitrary pairs; repeated symbols are merged.
    pub fn from_pairs<I: IntoIterator<Item = (Symbol, i32)>>(pairs: I) -> Monomial {
        let mut v: SmallVec<[(Symbol, i32); 4]> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(Symbol, i32); 4]> = SmallVec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Monomial { exps: out }
    }

    /// `z1^μ1 ⋯ zd^μd` for the given coordinate symbols.
    pub fn from_exponents(syms: &[Symbol], mu: &[i64]) -> Monomial {
        assert_eq!(syms.len(), mu.len(), "exponent vector length mismatch");
        Monomial::from_pairs(
            syms.iter().zip(mu).map(|(&s, &e)| (s, i32::try_from(e).expect("exponent overflow"))),
        )
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, s: Symbol) -> i32 {
        match self.exps.binary_search_by_key(&s, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn pairs(&self) -> &[(Symbol, i32)] {
        &self.exps
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.exps.iter().map(|p| p.0)
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|p| p.1 as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    pub fn inv(&self) -> Monomial {
        Monomial { exps: self.exps.iter().map(|&(s, e)| (s, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { exps: self.exps.iter().map(|&(s, e)| (s, e * k)).collect() }
    }

    /// Removes the given symbol, returning its exponent.
    pub fn split_off(&self, s: Symbol) -> (Monomial, i32) {
        let e = self.exponent(s);
        let exps = self.exps.iter().copied().filter(|p| p.0 != s).collect();
        (Monomial { exps }, e)
    }

    fn combine(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out: SmallVec<[(Symbol, i32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(s, e)| (s, sign * e)));
        Monomial { exps: out }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, f))) => return 0.cmp(&f),
                (Some(&(s, e)), Some(&(t, f))) => match s.cmp(&t) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    /// Factors sorted by name, `*`-separated; the empty monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut named: Vec<(std::sync::Arc<str>, i32)> =
            self.exps.iter().map(|&(s, e)| (s.name(), e)).collect();
        named.sort();
        for (k, (name, e)) in named.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
