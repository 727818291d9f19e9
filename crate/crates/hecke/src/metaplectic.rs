//! Metaplectic covers of split groups, described by a degree `n` and a
//! Weyl-invariant bilinear form `B` on the cocharacter lattice.
//!
//! The Whittaker functionals of an unramified principal series are indexed
//! by cosets `Λ / Λ⁽ⁿ⁾`. Intertwiners act on them through `k × k`
//! scattering blocks, which feed the representation schema with the root
//! scale `n_α`. The same coefficients give the Chinta–Gunnells action on
//! Laurent polynomials and the metaplectic Demazure operators.

use std::collections::HashMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{v_poly, Ctx, GaussOrientation, GaussRules, LaurentPoly, RationalFunction};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{Check, Failure, Report};
use crate::rmatrix::{r_tilde, tensor_word, word_label};
use crate::roots::{add, dot, identity, mat_vec, neg, scale, sub, CartanDatum, Mat, Weight};
use crate::schema::SchemaInstance;
use crate::whittaker::whittaker_schema_instance;

/// Which scattering coefficient a perturbation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TauKind {
    /// The diagonal coefficient `τ¹`.
    One,
    /// The off-diagonal coefficient `τ²`.
    Two,
}

/// Derived data of a cover.
#[derive(Clone, Debug)]
pub struct MetaplecticDatum {
    pub cartan: Arc<CartanDatum>,
    pub n: u32,
    /// Gram matrix of `B` in ambient coordinates.
    pub b: Mat,
    /// `Q(α_i∨) = B(α_i∨, α_i∨)/2` per simple coroot.
    pub q: Vec<i64>,
    /// `n_{α_i} = n / gcd(n, Q(α_i∨))`.
    pub n_alpha: Vec<i64>,
    /// A basis of `Λ⁽ⁿ⁾ = {μ : B(y, μ) ≡ 0 mod n for all y ∈ Λ}`.
    pub sublattice: Vec<Weight>,
    /// `Λ/Λ⁽ⁿ⁾ ≅ ⊕ ℤ/m_j`.
    pub moduli: Vec<i64>,
    /// Coset representatives `ρ + c`.
    pub reps: Vec<Weight>,
    pub orientation: GaussOrientation,
    pub ctx: Ctx,
    /// Lattice coordinates to Smith coordinates.
    to_smith: Mat,
    class_index: HashMap<Vec<i64>, usize>,
    tweaks: Vec<(usize, usize, TauKind, RationalFunction)>,
}

/// One simple reflection's scattering matrix, rows and columns indexed by
/// coset representatives; column `μ` is the image of the functional at `μ`.
#[derive(Clone, Debug)]
pub struct ScatteringBlock {
    pub i: usize,
    pub b: Matrix,
}

impl ScatteringBlock {
    /// Largest number of nonzero entries in a row.
    pub fn max_row_support(&self) -> usize {
        (0..self.b.rows()).map(|r| self.b.row(r).len()).max().unwrap_or(0)
    }
}

/// The identity form `B(μ, ν) = μ·ν` on `ℤ^d`.
pub fn dot_form(d: usize) -> Mat {
    identity(d)
}

/// Coordinates of `mu` in the lattice basis of `cartan`.
pub fn lattice_coordinates(cartan: &CartanDatum, mu: &[i64]) -> Result<Weight> {
    let basis = &cartan.lattice_basis;
    let m = basis.len();
    let d = cartan.dim;
    let mut a: Vec<Vec<Ratio<i64>>> = (0..d)
        .map(|r| {
            let mut row: Vec<Ratio<i64>> = (0..m).map(|c| Ratio::from_integer(basis[c][r])).collect();
            row.push(Ratio::from_integer(mu[r]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(m);
    for col in 0..m {
        let Some(p) = (pivot_row..d).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::Invalid("lattice basis is degenerate".into()));
        };
        a.swap(pivot_row, p);
        let inv = a[pivot_row][col].recip();
        for e in a[pivot_row].iter_mut() {
            *e *= inv;
        }
        for r in 0..d {
            if r != pivot_row && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..=m {
                    let t = a[pivot_row][c];
                    a[r][c] -= f * t;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if a[pivot_row..].iter().any(|row| !row[m].is_zero()) {
        return Err(Error::Invalid(format!("{mu:?} is not in the span of the lattice")));
    }
    pivots
        .iter()
        .map(|&r| {
            let x = a[r][m];
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::Invalid(format!("{mu:?} is not in the lattice")))
            }
        })
        .collect()
}

/// Diagonalizes `g` by unimodular row and column operations. Returns the
/// diagonal, the column transform `P` and its inverse (`U g P` is diagonal).
fn smith_diagonal(g: &Mat) -> (Vec<i64>, Mat, Mat) {
    let m = g.len();
    let mut a = g.clone();
    let mut p = identity(m);
    let mut pinv = identity(m);
    for t in 0..m {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..m {
                    if a[r][c] != 0 && best.map_or(true, |(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            if a[t][t] != 0 && best.is_some_and(|(br, bc)| a[br][bc].abs() == a[t][t].abs()) {
                best = Some((t, t));
            }
            let Some((pr, pc)) = best else { break };
            a.swap(t, pr);
            if pc != t {
                for row in a.iter_mut().chain(p.iter_mut()) {
                    row.swap(t, pc);
                }
                pinv.swap(t, pc);
            }
            let mut clean = true;
            for r in t + 1..m {
                let f = a[r][t] / a[t][t];
                for c in 0..m {
                    a[r][c] -= f * a[t][c];
                }
                clean &= a[r][t] == 0;
            }
            for c in t + 1..m {
                let f = a[t][c] / a[t][t];
                if f != 0 {
                    for r in 0..m {
                        a[r][c] -= f * a[r][t];
                        p[r][c] -= f * p[r][t];
                    }
                    for col in 0..m {
                        pinv[t][col] += f * pinv[c][col];
                    }
                }
                clean &= a[t][c] == 0;
            }
            if clean {
                break;
            }
        }
    }
    ((0..m).map(|i| a[i][i]).collect(), p, pinv)
}

fn mat_t(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

impl MetaplecticDatum {
    /// Builds and validates the cover data for `(cartan, n, B)`.
    pub fn new(cartan: Arc<CartanDatum>, n: u32, b: Mat) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("cover degree must be at least 1".into()));
        }
        let d = cartan.dim;
        if b.len() != d || b.iter().any(|row| row.len() != d) {
            return Err(Error::Invalid(format!("B must be a {d}x{d} matrix")));
        }
        if b != mat_t(&b) {
            return Err(Error::Invalid("B is not symmetric".into()));
        }
        let form = |x: &[i64], y: &[i64]| dot(x, &mat_vec(&b, y));
        let basis = &cartan.lattice_basis;
        for (w, el) in cartan.weyl.elements.iter().enumerate() {
            for x in basis {
                for y in basis {
                    if form(&mat_vec(&el.matrix, x), &mat_vec(&el.matrix, y)) != form(x, y) {
                        return Err(Error::Invalid(format!(
                            "B is not invariant under w = {}",
                            word_label_w(&cartan, w)
                        )));
                    }
                }
            }
        }
        for beta in &cartan.positive {
            if form(beta, beta) % 2 != 0 {
                return Err(Error::Invalid(format!("B is not even on the coroot {beta:?}")));
            }
        }
        let q: Vec<i64> = cartan.simple.iter().map(|a| form(a, a) / 2).collect();
        if let Some(i) = q.iter().position(|&x| x == 0) {
            return Err(Error::Invalid(format!("Q vanishes on the simple coroot {}", i + 1)));
        }
        let nn = n as i64;
        let n_alpha: Vec<i64> = q.iter().map(|&x| nn / nn.gcd(&x)).collect();

        let gram: Mat = basis.iter().map(|x| basis.iter().map(|y| form(x, y)).collect()).collect();
        let (diag, p, pinv) = smith_diagonal(&gram);
        let moduli: Vec<i64> = diag.iter().map(|&e| nn / nn.gcd(&e)).collect();
        let to_ambient = |c: &[i64]| -> Weight {
            let coords = mat_vec(&p, c);
            (0..d).map(|r| basis.iter().zip(&coords).map(|(l, x)| l[r] * x).sum()).collect()
        };
        let m = basis.len();
        let sublattice: Vec<Weight> = (0..m)
            .map(|j| {
                let mut e = vec![0; m];
                e[j] = moduli[j];
                to_ambient(&e)
            })
            .collect();
        let mut reps = Vec::new();
        let mut class_index = HashMap::new();
        let total: i64 = moduli.iter().product();
        for idx in 0..total {
            let mut y = vec![0; m];
            let mut rest = idx;
            for j in (0..m).rev() {
                y[j] = rest % moduli[j];
                rest /= moduli[j];
            }
            class_index.insert(y.clone(), reps.len());
            reps.push(add(&cartan.rho, &to_ambient(&y)));
        }
        let rules = GaussRules::new(n);
        let datum = MetaplecticDatum {
            cartan,
            n,
            b,
            q,
            n_alpha,
            sublattice,
            moduli,
            reps,
            orientation: GaussOrientation::Standard,
            ctx: Ctx::with_gauss(rules),
            to_smith: pinv,
            class_index,
            tweaks: Vec::new(),
        };
        for i in 0..datum.cartan.rank() {
            let a = scale(datum.n_alpha[i], &datum.cartan.simple[i]);
            if !datum.in_sublattice(&a)? {
                return Err(Error::Invalid(format!("n_a a{} is not in the sublattice", i + 1)));
            }
        }
        Ok(datum)
    }

    /// The cover of `GL_r` with `B` the dot product.
    pub fn gl(r: usize, n: u32) -> Result<Self> {
        Self::new(Arc::new(CartanDatum::gl(r)), n, dot_form(r))
    }

    /// The same datum with the Gauss index convention switched.
    pub fn with_orientation(mut self, orientation: GaussOrientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// The same datum with one scattering coefficient multiplied by `factor`.
    pub fn with_tau_factor(mut self, i: usize, col: usize, kind: TauKind, factor: RationalFunction) -> Self {
        self.tweaks.push((i, col, kind, factor));
        self
    }

    pub fn k(&self) -> usize {
        self.reps.len()
    }

    pub fn rules(&self) -> &GaussRules {
        self.ctx.gauss().expect("a metaplectic context carries Gauss rules")
    }

    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        dot(x, &mat_vec(&self.b, y))
    }

    fn smith_class(&self, mu: &[i64]) -> Result<Vec<i64>> {
        let c = lattice_coordinates(&self.cartan, mu)?;
        let y = mat_vec(&self.to_smith, &c);
        Ok(y.iter().zip(&self.moduli).map(|(a, m)| a.rem_euclid(*m)).collect())
    }

    pub fn in_sublattice(&self, mu: &[i64]) -> Result<bool> {
        Ok(self.smith_class(mu)?.iter().all(|&a| a == 0))
    }

    /// Index of the coset representative congruent to `mu`.
    pub fn class_of(&self, mu: &[i64]) -> Result<usize> {
        let key = self.smith_class(&sub(mu, &self.cartan.rho))?;
        Ok(self.class_index[&key])
    }

    /// `B(α_i∨, μ)`, validated to be divisible by `Q(α_i∨)`.
    fn pairing(&self, i: usize, mu: &[i64]) -> Result<i64> {
        let bm = self.form(&self.cartan.simple[i], mu);
        if bm % self.q[i] != 0 {
            return Err(Error::Invalid(format!("Q(a{}) does not divide B(a{}, {mu:?}) = {bm}", i + 1, i + 1)));
        }
        Ok(bm)
    }

    /// `rem_{n_α}(−B(α_i∨, μ)/Q(α_i∨))`.
    fn tau_exponent(&self, i: usize, mu: &[i64]) -> Result<i64> {
        Ok((-self.pairing(i, mu)? / self.q[i]).rem_euclid(self.n_alpha[i]))
    }

    fn gauss_index(&self, i: usize, mu: &[i64]) -> Result<i64> {
        Ok(self.orientation.index(self.pairing(i, mu)? - self.q[i]))
    }

    /// `x = z^{n_α α_i∨}`.
    pub fn x(&self, i: usize) -> LaurentPoly {
        self.cartan.zpow(&scale(self.n_alpha[i], &self.cartan.simple[i]))
    }

    fn alpha_pow(&self, i: usize, e: i64) -> LaurentPoly {
        self.cartan.zpow(&scale(e, &self.cartan.simple[i]))
    }

    /// `c_s(z) = (1 − v x)/(1 − x)`.
    pub fn c_factor(&self, i: usize) -> RationalFunction {
        let x = self.x(i);
        let one = LaurentPoly::one();
        RationalFunction::from_fraction(&one - &(&v_poly() * &x), &one - &x).expect("regular")
    }

    fn tweak(&self, i: usize, mu: &[i64], kind: TauKind, f: RationalFunction) -> Result<RationalFunction> {
        let col = self.class_of(mu)?;
        Ok(self
            .tweaks
            .iter()
            .filter(|t| t.0 == i && t.1 == col && t.2 == kind)
            .fold(f, |acc, t| &acc * &t.3))
    }

    /// `τ¹ = (1 − v) z^{rem(−B/Q) α∨} / (1 − v x)`.
    pub fn tau1(&self, i: usize, mu: &[i64]) -> Result<RationalFunction> {
        let x = self.x(i);
        let one = LaurentPoly::one();
        let num = &(&one - &v_poly()) * &self.alpha_pow(i, self.tau_exponent(i, mu)?);
        let f = RationalFunction::from_fraction(num, &one - &(&v_poly() * &x))?;
        self.tweak(i, mu, TauKind::One, f)
    }

    /// `τ² = g(B − Q) z^{−α∨} (1 − x) / (1 − v x)`, attached to the class of `s_i μ + α_i∨`.
    pub fn tau2(&self, i: usize, mu: &[i64]) -> Result<RationalFunction> {
        let x = self.x(i);
        let one = LaurentPoly::one();
        let g = self.rules().g(self.gauss_index(i, mu)?);
        let num = &(&g * &self.alpha_pow(i, -1)) * &(&one - &x);
        let f = RationalFunction::from_fraction(num, &one - &(&v_poly() * &x))?;
        self.tweak(i, mu, TauKind::Two, f)
    }

    /// Representative of the class receiving the `τ²` term from `μ`.
    pub fn tau2_target(&self, i: usize, mu: &[i64]) -> Result<usize> {
        self.class_of(&add(&self.cartan.reflect(i, mu), &self.cartan.simple[i]))
    }

    /// The matrix `c_s·τ` at the base point `z`.
    pub fn scattering_block(&self, i: usize) -> Result<ScatteringBlock> {
        let k = self.k();
        let c = self.c_factor(i);
        let mut b = Matrix::zeros(k, k);
        for (col, mu) in self.reps.iter().enumerate() {
            let d = self.ctx.mul(&c, &self.tau1(i, mu)?);
            b.set(col, col, self.ctx.add(&b.get(col, col), &d));
            let t = self.tau2_target(i, mu)?;
            let e = self.ctx.mul(&c, &self.tau2(i, mu)?);
            b.set(t, col, self.ctx.add(&b.get(t, col), &e));
        }
        Ok(ScatteringBlock { i, b })
    }

    /// Chinta–Gunnells action `c_s·(s_i·z^μ)`:
    /// `z^{s_i μ}[z^{−rem(−B/Q)α∨}(1 − v)/(1 − x) − g(B − Q) z^{(1−n_α)α∨}]`.
    pub fn cg_monomial(&self, i: usize, mu: &[i64]) -> Result<RationalFunction> {
        let (num, den) = self.cg_parts(i, mu)?;
        RationalFunction::from_fraction(num, den)
    }

    /// Numerator over the common denominator `1 − x`.
    fn cg_parts(&self, i: usize, mu: &[i64]) -> Result<(LaurentPoly, LaurentPoly)> {
        let one = LaurentPoly::one();
        let x = self.x(i);
        let e = self.tau_exponent(i, mu)?;
        let g = self.rules().g(self.gauss_index(i, mu)?);
        let first = &(&one - &v_poly()) * &self.alpha_pow(i, -e);
        let second = &(&g * &self.alpha_pow(i, 1 - self.n_alpha[i])) * &(&one - &x);
        let zs = self.cartan.zpow(&self.cartan.reflect(i, mu));
        Ok((self.ctx.normalize_poly(&zs * &(&first - &second)), &one - &x))
    }

    /// The Chinta–Gunnells action on `f`, whose monomials must share one coset.
    pub fn cg_action_coset(&self, i: usize, f: &LaurentPoly) -> Result<RationalFunction> {
        let mut classes = f.terms().iter().map(|(m, _)| self.class_of(&self.exponents(m)));
        if let Some(first) = classes.next() {
            let first = first?;
            for c in classes {
                if c? != first {
                    return Err(Error::Invalid("polynomial spans several cosets".into()));
                }
            }
        }
        self.cg_action(i, f)
    }

    /// The Chinta–Gunnells action on `f`, extended by additivity.
    pub fn cg_action(&self, i: usize, f: &LaurentPoly) -> Result<RationalFunction> {
        let (num, den) = self.cg_numerator(i, f)?;
        Ok(self.ctx.normalize(RationalFunction::from_fraction(num, den)?))
    }

    fn cg_numerator(&self, i: usize, f: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        let mut num = LaurentPoly::zero();
        for (m, c) in f.terms() {
            let rest = m.div(&crate::algebra::Monomial::from_exponents(&self.cartan.z(), &self.exponents(m)));
            let (p, _) = self.cg_parts(i, &self.exponents(m))?;
            num = &num + &p.mul_term(c, &rest);
        }
        Ok((self.ctx.normalize_poly(num), &LaurentPoly::one() - &self.x(i)))
    }

    fn exponents(&self, m: &crate::algebra::Monomial) -> Weight {
        self.cartan.z().iter().map(|&s| m.exponent(s) as i64).collect()
    }

    /// Metaplectic Demazure operator `𝒯_i f = (1 − v)x/(1 − x)·f − x·c_s(s_i·f)`.
    pub fn met_demazure(&self, i: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
        let one = LaurentPoly::one();
        let x = self.x(i);
        let (cg, den) = self.cg_numerator(i, f)?;
        let num = &(&(&(&one - &v_poly()) * &x) * f) - &(&x * &cg);
        Ok(self.ctx.normalize_poly(num.exact_divide(&den)?))
    }

    /// `𝒯_{i_1} ⋯ 𝒯_{i_l} f` (rightmost letter first).
    pub fn met_demazure_word(&self, word: &[usize], f: &LaurentPoly) -> Result<LaurentPoly> {
        word.iter().rev().try_fold(f.clone(), |acc, &i| self.met_demazure(i, &acc))
    }

    /// The schema instance with `A(w, i)` the scattering block at `wz`.
    pub fn schema_instance(&self) -> Result<SchemaInstance> {
        let c = &self.cartan;
        let blocks: Vec<Matrix> = (0..c.rank()).map(|i| self.scattering_block(i).map(|b| b.b)).collect::<Result<_>>()?;
        let name = format!("metaplectic {} n={}", c.cartan_type, self.n);
        let mut inst = SchemaInstance::new(name, c.clone(), self.k(), self.ctx.clone());
        inst.root_scale = self.n_alpha.clone();
        let pairs: Vec<(usize, usize)> = (0..c.order()).flat_map(|w| (0..c.rank()).map(move |i| (w, i))).collect();
        inst.a = pairs
            .into_par_iter()
            .map(|(w, i)| {
                let winv = c.weyl.inverse(w);
                ((w, i), blocks[i].map(|e| c.act_fn(winv, e)))
            })
            .collect();
        Ok(inst)
    }

    /// Bernstein weights: the basis of `Λ⁽ⁿ⁾`.
    pub fn bernstein_weights(&self) -> Vec<Weight> {
        self.sublattice.clone()
    }

    /// The base vector of the functional model: component `(w, ν)` is
    /// `(wz)^{−λ}` when `ν ≡ −λ` and zero otherwise.
    pub fn base_vector(&self, lambda: &[i64]) -> Result<Vec<RationalFunction>> {
        let c = &self.cartan;
        let k = self.k();
        let nu = self.class_of(&neg(lambda))?;
        let mut out = vec![RationalFunction::zero(); k * c.order()];
        for w in 0..c.order() {
            out[w * k + nu] = RationalFunction::from_poly(c.zpow(&c.eval_at_w(w, &neg(lambda))));
        }
        Ok(out)
    }

    /// `T_w` applied to `vector` for every `w`, built as `T_{s_i y} = T_i T_y`.
    fn orbit_vectors(&self, ts: &[Matrix], vector: Vec<RationalFunction>) -> Vec<Vec<RationalFunction>> {
        let g = &self.cartan.weyl;
        let mut out: Vec<Option<Vec<RationalFunction>>> = vec![None; g.len()];
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.sort_by_key(|&w| g.length(w));
        for w in order {
            let value = if g.length(w) == 0 {
                vector.clone()
            } else {
                let i = g.elements[w].word[0];
                let prev = out[g.left_mul(i, w)].as_ref().expect("shorter first");
                ts[i].mul_vec(prev, &self.ctx)
            };
            out[w] = Some(value);
        }
        out.into_iter().map(|x| x.expect("filled")).collect()
    }

    /// `𝒯_w f` for every `w`, with the same recursion.
    fn orbit_polys(&self, f: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
        let g = &self.cartan.weyl;
        let mut out: Vec<Option<LaurentPoly>> = vec![None; g.len()];
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.sort_by_key(|&w| g.length(w));
        for w in order {
            let value = if g.length(w) == 0 {
                f.clone()
            } else {
                let i = g.elements[w].word[0];
                self.met_demazure(i, out[g.left_mul(i, w)].as_ref().expect("shorter first"))?
            };
            out[w] = Some(value);
        }
        Ok(out.into_iter().map(|x| x.expect("filled")).collect())
    }

    fn identity_block(&self, vector: &[RationalFunction]) -> Vec<RationalFunction> {
        let k = self.k();
        let e = self.cartan.weyl.identity();
        vector[e * k..(e + 1) * k].to_vec()
    }

    fn aggregate(&self, parts: &[RationalFunction]) -> RationalFunction {
        self.ctx.normalize(crate::matrix::sum_balanced(parts.to_vec()))
    }

    /// `Σ_w T_w` applied to the base vector, read off at `w = 1`.
    pub fn whittaker_value(&self, lambda: &[i64]) -> Result<WhittakerValue> {
        if !self.cartan.is_dominant(lambda) {
            return Err(Error::Invalid(format!("weight {lambda:?} is not dominant")));
        }
        let inst = self.schema_instance()?;
        let ts: Vec<Matrix> = (0..self.cartan.rank()).map(|i| inst.build_t(i)).collect::<Result<_>>()?;
        let orbit = self.orbit_vectors(&ts, self.base_vector(lambda)?);
        let k = self.k();
        let mut components = vec![RationalFunction::zero(); k];
        for v in &orbit {
            for (a, e) in self.identity_block(v).into_iter().enumerate() {
                components[a] = self.ctx.add(&components[a], &e);
            }
        }
        let aggregate = self.aggregate(&components);
        let demazure = self.orbit_polys(&self.cartan.zpow(&neg(lambda)))?;
        let expected = self.ctx.normalize_poly(demazure.iter().fold(LaurentPoly::zero(), |acc, p| &acc + p));
        Ok(WhittakerValue { lambda: lambda.to_vec(), components, aggregate, demazure_sum: expected })
    }

    /// For every `w`: the `w = 1` aggregate of `T_w·base(λ)` equals `𝒯_w(z^{−λ})`.
    pub fn check_met_dz(&self, ts: &[Matrix], lambda: &[i64]) -> Check {
        Check::run(format!("metaplectic Demazure vs block action, lambda={lambda:?}"), || {
            let base = match self.base_vector(lambda) {
                Ok(b) => b,
                Err(e) => return Some(error(e)),
            };
            let orbit = self.orbit_vectors(ts, base);
            let polys = match self.orbit_polys(&self.cartan.zpow(&neg(lambda))) {
                Ok(p) => p,
                Err(e) => return Some(error(e)),
            };
            for (w, (vec, p)) in orbit.iter().zip(&polys).enumerate() {
                let agg = self.aggregate(&self.identity_block(vec));
                let rhs = RationalFunction::from_poly(p.clone());
                if !self.ctx.rf_equal(&agg, &rhs) {
                    return Some(Failure { location: format!("w = {}", word_label_w(&self.cartan, w)), lhs: agg.to_string(), rhs: rhs.to_string() });
                }
            }
            None
        })
    }

    /// Met-dz on every `z^{−λ}` with lattice coordinates bounded by `bound`.
    pub fn met_dz_report(&self, bound: i64) -> Result<Report> {
        let inst = self.schema_instance()?;
        let ts: Vec<Matrix> = (0..self.cartan.rank()).map(|i| inst.build_t(i)).collect::<Result<_>>()?;
        let mut report = Report::new(format!("met-dz {} n={}", self.cartan.cartan_type, self.n));
        let checks: Vec<Check> = lattice_box(&self.cartan, bound).par_iter().map(|l| self.check_met_dz(&ts, l)).collect();
        for c in checks {
            report.push(c);
        }
        Ok(report)
    }

    /// Quadratic and braid relations of the metaplectic Demazure operators on
    /// monomials with lattice coordinates bounded by `bound`.
    pub fn demazure_relations_report(&self, bound: i64) -> Report {
        let c = &self.cartan;
        let basis = lattice_box(c, bound);
        let mut report = Report::new(format!("metaplectic Demazure {} n={}", c.cartan_type, self.n));
        for i in 0..c.rank() {
            report.push(Check::run(format!("quadratic T{}", i + 1), || {
                basis.par_iter().find_map_any(|mu| {
                    let f = c.zpow(mu);
                    let res = (|| -> Result<(LaurentPoly, LaurentPoly)> {
                        let t1 = self.met_demazure(i, &f)?;
                        let t2 = self.met_demazure(i, &t1)?;
                        let vm1 = &v_poly() - &LaurentPoly::one();
                        Ok((t2, self.ctx.normalize_poly(&(&vm1 * &t1) + &(&v_poly() * &f))))
                    })();
                    poly_failure(res, || format!("z^{mu:?}"))
                })
            }));
        }
        for i in 0..c.rank() {
            for j in i + 1..c.rank() {
                let m = c.orders[i][j] as usize;
                let wi: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { i } else { j }).collect();
                let wj: Vec<usize> = (0..m).map(|t| if t % 2 == 0 { j } else { i }).collect();
                report.push(Check::run(format!("braid T{} T{}", i + 1, j + 1), || {
                    basis.par_iter().find_map_any(|mu| {
                        let f = c.zpow(mu);
                        let res = (|| -> Result<(LaurentPoly, LaurentPoly)> {
                            Ok((self.met_demazure_word(&wi, &f)?, self.met_demazure_word(&wj, &f)?))
                        })();
                        poly_failure(res, || format!("z^{mu:?}"))
                    })
                }));
            }
        }
        report
    }

    /// Every scattering entry has the shape `z^{jα∨}·F(z^{n_α α∨})`.
    pub fn check_z_dependence(&self) -> Check {
        Check::run(format!("scattering data of {} n={} factors through z^(n_a a)", self.cartan.cartan_type, self.n), || {
            for i in 0..self.cartan.rank() {
                let block = match self.scattering_block(i) {
                    Ok(b) => b,
                    Err(e) => return Some(error(e)),
                };
                for (r, col, e) in block.b.iter() {
                    if !self.factors_through_x(i, e) {
                        return Some(Failure { location: format!("block {} entry ({r}, {col})", i + 1), lhs: e.to_string(), rhs: "z^(j a) F(x)".into() });
                    }
                }
            }
            None
        })
    }

    fn alpha_multiple(&self, i: usize, mu: &[i64]) -> Option<i64> {
        let a = &self.cartan.simple[i];
        let (p, &s) = a.iter().enumerate().find(|(_, &s)| s != 0)?;
        (mu[p] % s == 0 && scale(mu[p] / s, a) == mu).then_some(mu[p] / s)
    }

    fn factors_through_x(&self, i: usize, e: &RationalFunction) -> bool {
        let na = self.n_alpha[i];
        let zs = self.cartan.z();
        let shifts = |p: &LaurentPoly| -> Option<Vec<i64>> {
            p.terms()
                .iter()
                .map(|(m, _)| {
                    let mu: Weight = zs.iter().map(|&s| m.exponent(s) as i64).collect();
                    self.alpha_multiple(i, &mu).map(|j| j.rem_euclid(na))
                })
                .collect()
        };
        let Some(num) = shifts(e.numerator()) else { return false };
        let dens_ok = e.denominator_factors().iter().all(|(f, _)| shifts(f).is_some_and(|s| s.iter().all(|&j| j == 0)));
        dens_ok && num.windows(2).all(|w| w[0] == w[1])
    }
}

fn error(e: Error) -> Failure {
    Failure { location: "construction".into(), lhs: e.to_string(), rhs: String::new() }
}

fn poly_failure(res: Result<(LaurentPoly, LaurentPoly)>, at: impl Fn() -> String) -> Option<Failure> {
    match res {
        Ok((a, b)) if a == b => None,
        Ok((a, b)) => Some(Failure { location: at(), lhs: a.to_string(), rhs: b.to_string() }),
        Err(e) => Some(Failure { location: at(), lhs: e.to_string(), rhs: String::new() }),
    }
}

fn word_label_w(cartan: &CartanDatum, w: usize) -> String {
    let s = cartan.weyl.elements[w].word_string();
    if s.is_empty() {
        "1".into()
    } else {
        format!("s{s}")
    }
}

/// Lattice points `Σ c_j l_j` with `|c_j| ≤ bound`.
pub fn lattice_box(cartan: &CartanDatum, bound: i64) -> Vec<Weight> {
    let m = cartan.lattice_basis.len();
    let side = 2 * bound + 1;
    (0..side.pow(m as u32))
        .map(|mut idx| {
            let mut mu = vec![0; cartan.dim];
            for l in &cartan.lattice_basis {
                let c = idx % side - bound;
                idx /= side;
                mu = add(&mu, &scale(c, l));
            }
            mu
        })
        .collect()
}

/// The spherical Whittaker value at `λ`, per coset and aggregated.
#[derive(Clone, Debug)]
pub struct WhittakerValue {
    pub lambda: Weight,
    /// `[Σ_w T_w base(λ)]_{(1, ν)}` per representative `ν`.
    pub components: Vec<RationalFunction>,
    pub aggregate: RationalFunction,
    /// `Σ_w 𝒯_w(z^{−λ})`.
    pub demazure_sum: LaurentPoly,
}

impl WhittakerValue {
    pub fn agrees(&self, ctx: &Ctx) -> bool {
        ctx.rf_equal(&self.aggregate, &RationalFunction::from_poly(self.demazure_sum.clone()))
    }
}

/// `n_α⌈B/(n_αQ)⌉ − B/Q = rem_{n_α}(−B/Q)`, with `b_over_q = B/Q`.
pub fn rem_identity_check(n_alpha: i64, b_over_q: i64) -> bool {
    assert!(n_alpha >= 1, "n_alpha must be positive");
    n_alpha * Integer::div_ceil(&b_over_q, &n_alpha) - b_over_q == (-b_over_q).rem_euclid(n_alpha)
}

/// The scattering block of `GL_r` equals `(1 − vx)/(1 − x)·(τR̃(x))_{i,i+1}`
/// with `x = (z_i/z_{i+1})^n`, after the change of basis
/// `ν ↦ z^ν` on rows and `μ ↦ (s_i z)^{−μ}` on columns.
pub fn scattering_dictionary_check(r: usize, n: u32, orientation: GaussOrientation) -> Result<Report> {
    let datum = MetaplecticDatum::gl(r, n)?.with_orientation(orientation);
    scattering_dictionary_report(&datum)
}

/// The dictionary check for a prepared `GL_r` datum.
pub fn scattering_dictionary_report(datum: &MetaplecticDatum) -> Result<Report> {
    let c = &datum.cartan;
    let (r, n) = (c.dim, datum.n as usize);
    for (idx, rep) in datum.reps.iter().enumerate() {
        let word: Weight = tensor_word(n, r, idx).into_iter().map(|x| x as i64).collect();
        if sub(rep, &c.rho) != word {
            return Err(Error::Unsupported("dictionary check needs the GL_r cover with B = dot".into()));
        }
    }
    let mut report = Report::new(format!("R-matrix dictionary r={r} n={n}"));
    let one = LaurentPoly::one();
    for i in 0..c.rank() {
        let block = datum.scattering_block(i)?;
        let xp = datum.x(i);
        let x = RationalFunction::from_poly(xp.clone());
        let scalar = RationalFunction::from_fraction(&one - &(&v_poly() * &xp), &one - &xp)?;
        let op = r_tilde(n, &x, datum.rules(), datum.orientation).flip_left().embed(r, i, i + 1).matrix.scale(&scalar, &datum.ctx);
        let si = c.weyl.from_word(&[i]);
        let mut conj = Matrix::zeros(datum.k(), datum.k());
        for (row, col, e) in block.b.iter() {
            let left = c.zpow(&datum.reps[row]);
            let right = c.zpow(&neg(&c.act(si, &datum.reps[col])));
            conj.set(row, col, datum.ctx.normalize(e.mul_poly(&(&left * &right))));
        }
        let label = |a: usize, b: usize| format!("entry ({}, {})", word_label(&tensor_word(n, r, a)), word_label(&tensor_word(n, r, b)));
        report.push(Check::run(format!("block {} matches R-tilde", i + 1), || conj.compare(&op, &datum.ctx, label)));
    }
    Ok(report)
}

/// For `n = 1` every `A` entry equals the Whittaker instance entry.
pub fn check_collapse(cartan: Arc<CartanDatum>) -> Check {
    let b = dot_form(cartan.dim);
    Check::run(format!("n=1 cover of {} equals the whittaker instance", cartan.cartan_type), || {
        let met = match MetaplecticDatum::new(cartan.clone(), 1, b).and_then(|d| d.schema_instance()) {
            Ok(m) => m,
            Err(e) => return Some(error(e)),
        };
        let wh = whittaker_schema_instance(cartan.clone());
        let mut keys: Vec<_> = wh.a.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter().find_map(|key| {
            met.a[&key].compare(&wh.a[&key], &met.ctx, |_, _| format!("A entry (w = {}, i = {})", word_label_w(&cartan, key.0), key.1 + 1))
        })
    })
}

/// `c_s·s_i` commutes with multiplication by `z^λ`, `λ ∈ Λ⁽ⁿ⁾`, up to `z^{s_i λ}`.
pub fn check_cg_representatives(datum: &MetaplecticDatum, bound: i64) -> Check {
    Check::run(format!("Chinta-Gunnells action is coset-consistent ({} n={})", datum.cartan.cartan_type, datum.n), || {
        let c = &datum.cartan;
        for mu in lattice_box(c, bound) {
            for lam in &datum.sublattice {
                for i in 0..c.rank() {
                    let res = (|| -> Result<(RationalFunction, RationalFunction)> {
                        let lhs = datum.cg_monomial(i, &add(&mu, lam))?;
                        let rhs = datum.cg_monomial(i, &mu)?.mul_poly(&c.zpow(&c.reflect(i, lam)));
                        Ok((lhs, rhs))
                    })();
                    match res {
                        Ok((a, b)) if datum.ctx.rf_equal(&a, &b) => {}
                        Ok((a, b)) => return Some(Failure { location: format!("s{} on z^{mu:?} shifted by {lam:?}", i + 1), lhs: a.to_string(), rhs: b.to_string() }),
                        Err(e) => return Some(error(e)),
                    }
                }
            }
        }
        None
    })
}

/// Composition scalar, quadratic, braid and Bernstein checks on the cover.
pub fn verify_cover(datum: &MetaplecticDatum) -> Result<Report> {
    let inst = datum.schema_instance()?;
    let mut report = inst.verify(&datum.bernstein_weights());
    report.push(datum.check_z_dependence());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_identity_is_trivial() {
        let (d, p, q) = smith_diagonal(&identity(3));
        assert_eq!(d, vec![1, 1, 1]);
        assert_eq!(p, identity(3));
        assert_eq!(q, identity(3));
    }

    #[test]
    fn smith_transform_inverse() {
        let g = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (d, p, q) = smith_diagonal(&g);
        let pq = crate::roots::mat_mul(&p, &q);
        assert_eq!(pq, identity(3));
        assert_eq!(d.iter().map(|x| x.abs()).product::<i64>(), 144);
    }

    #[test]
    fn n_one_is_trivial() {
        let d = MetaplecticDatum::gl(3, 1).unwrap();
        assert_eq!(d.k(), 1);
        assert_eq!(d.n_alpha, vec![1, 1]);
    }
}
