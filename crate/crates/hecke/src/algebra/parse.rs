//! Parser for the textual polynomial syntax produced by `Display`.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := ident ('^' ['-'] int)?
//! coeff  := int ('/' int)?
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::poly::{Coef, LaurentPoly};
use super::symbol::Symbol;
use crate::error::{Error, Result};

/// Parses a Laurent polynomial.
///
/// With `known = Some(list)`, identifiers must name one of the listed
/// symbols; with `None` every identifier is accepted.
pub fn parse_poly(src: &str, known: Option<&[Symbol]>) -> Result<LaurentPoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, known };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    known: Option<&'a [Symbol]>,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if negative { -c } else { c }));
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(Monomial, Coef)> {
        let mut coef = Coef::one();
        let mut mono = Monomial::one();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coef = self.coeff()?;
                if !self.eat(b'*') {
                    return Ok((mono, coef));
                }
                mono = self.factor()?;
            }
            Some(c) if is_ident_start(c) => mono = self.factor()?,
            Some(_) => return Err(self.err("expected a term")),
            None => return Err(self.err("unexpected end of input")),
        }
        while self.eat(b'*') {
            mono = mono.mul(&self.factor()?);
        }
        Ok((mono, coef))
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn coeff(&mut self) -> Result<Coef> {
        let p = self.uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let q = self.uint()?;
            if q.is_zero() {
                return Err(Error::Syntax { offset: at, message: "zero denominator".into() });
            }
            return Ok(Coef::new(p, q));
        }
        Ok(Coef::from_integer(p))
    }

    fn factor(&mut self) -> Result<Monomial> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(&c) if is_ident_start(c) => {}
            Some(_) => return Err(self.err("expected a symbol")),
            None => return Err(self.err("unexpected end of input")),
        }
        while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let sym = match self.known {
            None => Symbol::new(name),
            Some(list) => match Symbol::lookup(name).filter(|s| list.contains(s)) {
                Some(s) => s,
                None => return Err(Error::UnknownSymbol { offset: start, name: name.to_string() }),
            },
        };
        let mut e: i64 = 1;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let at = self.pos;
            let k = self.uint()?;
            let k: i64 = i64::try_from(k)
                .ok()
                .filter(|k| *k <= i32::MAX as i64)
                .ok_or(Error::Syntax { offset: at, message: "exponent out of range".into() })?;
            e = if neg { -k } else { k };
        }
        Ok(Monomial::from_pairs([(sym, e as i32)]))
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}
