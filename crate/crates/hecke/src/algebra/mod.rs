//! Exact arithmetic: Laurent polynomials and rational functions over ℚ in
//! named commuting symbols, plus formal Gauss sums.

pub mod gauss;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod symbol;

pub use gauss::{Ctx, GaussOrientation, GaussRules, PolyOp};
pub use monomial::Monomial;
pub use parse::parse_poly;
pub use poly::{int, ratio, Coef, LaurentPoly};
pub use ratfun::RationalFunction;
pub use symbol::{z_symbols, Symbol};

/// `v = u^2`.
pub fn v_poly() -> LaurentPoly {
    LaurentPoly::var(Symbol::u()).pow(2)
}

/// `v = u^2` as a rational function.
pub fn v() -> RationalFunction {
    RationalFunction::from_poly(v_poly())
}

/// `z^μ` in the coordinates `z1..zd`.
pub fn zpow(mu: &[i64]) -> LaurentPoly {
    LaurentPoly::z_pow(&z_symbols(mu.len()), mu)
}

/// `(1 - a·z^μ) / (1 - z^μ)` for a polynomial coefficient `a`.
pub fn c_ratio(a: &LaurentPoly, mu: &[i64]) -> RationalFunction {
    let x = zpow(mu);
    let one = LaurentPoly::one();
    RationalFunction::from_fraction(&one - &(a * &x), &one - &x).expect("nonzero denominator")
}
