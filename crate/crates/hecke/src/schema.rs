//! The representation schema: intertwiner data `𝒜_{s_i}^{wz}: 𝓜(wz) → 𝓜(s_i wz)`
//! on the sum `⊕_w 𝓜(wz)`, the operators `𝔗_i`, `θ_λ`, and exact checks of the
//! Hecke relations.
//!
//! Vectors of the big space are indexed by `(w, a)` with `w` a Weyl group
//! element (in [`WeylGroup`](crate::roots::WeylGroup) order) and `0 ≤ a < k`,
//! flattened to `w·k + a`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{v, v_poly, Ctx, LaurentPoly, Monomial, RationalFunction, Symbol};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{Check, Failure, Report};
use crate::roots::{neg, scale, CartanDatum, CartanType, Weight};

/// Schema data for a Cartan datum.
#[derive(Clone, Debug)]
pub struct SchemaInstance {
    pub name: String,
    pub cartan: Arc<CartanDatum>,
    /// Dimension `k` of each `𝓜(wz)`.
    pub k: usize,
    /// `A[(w, i)]`: the `k × k` matrix of `𝒜_{s_i}^{wz}` (columns index `𝓜(wz)`).
    pub a: HashMap<(usize, usize), Matrix>,
    /// Exponent multiplier per simple root (`n_α` on a metaplectic torus).
    pub root_scale: Vec<i64>,
    pub ctx: Ctx,
}

impl SchemaInstance {
    pub fn new(name: impl Into<String>, cartan: Arc<CartanDatum>, k: usize, ctx: Ctx) -> Self {
        let rank = cartan.rank();
        SchemaInstance { name: name.into(), cartan, k, a: HashMap::new(), root_scale: vec![1; rank], ctx }
    }

    /// Fills `A[(w, i)]` for every pair from a closure.
    pub fn fill(&mut self, f: impl Fn(usize, usize) -> Matrix) {
        for w in 0..self.cartan.order() {
            for i in 0..self.cartan.rank() {
                self.a.insert((w, i), f(w, i));
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.k * self.cartan.order()
    }

    /// `n_i α_i∨`.
    pub fn scaled_root(&self, i: usize) -> Weight {
        scale(self.root_scale[i], &self.cartan.simple[i])
    }

    /// `x = (wz)^{n_i α_i∨}`.
    pub fn x_at(&self, w: usize, i: usize) -> LaurentPoly {
        self.cartan.zpow(&self.cartan.eval_at_w(w, &self.scaled_root(i)))
    }

    /// `D_i(wz) = (1 − v)x / (1 − x)`.
    pub fn d_coefficient(&self, w: usize, i: usize) -> RationalFunction {
        let x = self.x_at(w, i);
        let one = LaurentPoly::one();
        RationalFunction::from_fraction(&(&one - &v_poly()) * &x, &one - &x).expect("regular point")
    }

    /// `((1 − vx)(1 − v/x)) / ((1 − x)(1 − 1/x))` at `x = (wz)^{n_i α_i∨}`.
    pub fn composition_scalar(&self, w: usize, i: usize) -> RationalFunction {
        let x = self.x_at(w, i);
        let xi = LaurentPoly::monomial(x.as_term().expect("monomial").0.inv());
        let one = LaurentPoly::one();
        let vp = v_poly();
        let num = &(&one - &(&vp * &x)) * &(&one - &(&vp * &xi));
        RationalFunction::from_parts(num, vec![(&one - &x, 1), (&one - &xi, 1)]).expect("regular point")
    }

    fn a_entry(&self, w: usize, i: usize) -> Result<&Matrix> {
        self.a.get(&(w, i)).ok_or_else(|| Error::Invalid(format!("missing A entry at (w = {w}, i = {i})")))
    }

    /// The operator `𝔗_i`.
    pub fn build_t(&self, i: usize) -> Result<Matrix> {
        let g = &self.cartan.weyl;
        let k = self.k;
        let mut t = Matrix::zeros(self.dim(), self.dim());
        for w in 0..g.len() {
            let d = self.d_coefficient(w, i);
            for a in 0..k {
                t.set(w * k + a, w * k + a, d.clone());
            }
            let y = g.left_mul(i, w);
            t.set_block(w * k, y * k, self.a_entry(y, i)?);
        }
        Ok(t)
    }

    /// The diagonal operator `θ_λ`, block `w` equal to `(wz)^λ`.
    pub fn build_theta(&self, lambda: &[i64]) -> Matrix {
        let k = self.k;
        let mut entries = Vec::with_capacity(self.dim());
        for w in 0..self.cartan.order() {
            let m = RationalFunction::from_poly(self.cartan.zpow(&self.cartan.eval_at_w(w, lambda)));
            entries.extend(std::iter::repeat(m).take(k));
        }
        Matrix::diagonal(entries)
    }

    /// `T_w` along the canonical reduced word.
    pub fn apply_tw(&self, w: usize) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.dim());
        for &i in &self.cartan.weyl.elements[w].word {
            acc = acc.mul(&self.build_t(i)?, &self.ctx);
        }
        Ok(acc)
    }

    /// `Σ_w T_w`, computed with the recursion `T_{w s_i} = T_w T_i` for `w s_i > w`.
    pub fn spherical_sum(&self) -> Result<Matrix> {
        let g = &self.cartan.weyl;
        let ts: Vec<Matrix> = (0..self.cartan.rank()).map(|i| self.build_t(i)).collect::<Result<_>>()?;
        let mut tw: Vec<Option<Matrix>> = vec![None; g.len()];
        tw[0] = Some(Matrix::identity(self.dim()));
        let mut order: Vec<usize> = (0..g.len()).collect();
        order.sort_by_key(|&w| g.length(w));
        let mut sum = Matrix::zeros(self.dim(), self.dim());
        for &w in &order {
            if w != 0 {
                let word = &g.elements[w].word;
                let last = *word.last().expect("nonidentity");
                let prev = g.right_mul(w, last);
                let m = tw[prev].as_ref().expect("shorter first").mul(&ts[last], &self.ctx);
                tw[w] = Some(m);
            }
            sum = sum.add(tw[w].as_ref().expect("computed"), &self.ctx);
        }
        Ok(sum)
    }

    fn label(&self) -> impl Fn(usize, usize) -> String + Sync + '_ {
        move |r, c| {
            let k = self.k;
            let g = &self.cartan.weyl;
            format!(
                "block (w={}, w'={}) entry ({}, {})",
                word_label(&g.elements[r / k].word_string()),
                word_label(&g.elements[c / k].word_string()),
                r % k,
                c % k
            )
        }
    }

    /// Composition scalar identity `𝒜^{s_i wz}𝒜^{wz} = scalar` for every `(w, i)`.
    pub fn check_composition(&self) -> Check {
        Check::run(format!("{}: composition scalar", self.name), || {
            let g = &self.cartan.weyl;
            for i in 0..self.cartan.rank() {
                for w in 0..g.len() {
                    let y = g.left_mul(i, w);
                    let (Ok(ay), Ok(aw)) = (self.a_entry(y, i), self.a_entry(w, i)) else {
                        return Some(missing(w, i));
                    };
                    let lhs = ay.mul(aw, &self.ctx);
                    let rhs = Matrix::scalar(self.k, &self.composition_scalar(w, i));
                    if let Some(mut f) = lhs.compare(&rhs, &self.ctx, |r, c| format!("({r}, {c})")) {
                        f.location = format!("i={}, w={}: {}", i + 1, word_label(&g.elements[w].word_string()), f.location);
                        return Some(f);
                    }
                }
            }
            None
        })
    }

    /// `𝔗_i² = (v − 1)𝔗_i + v`.
    pub fn check_quadratic(&self, i: usize) -> Check {
        Check::run(format!("{}: quadratic T{}", self.name, i + 1), || {
            let t = match self.build_t(i) {
                Ok(t) => t,
                Err(e) => return Some(error_failure(e)),
            };
            let lhs = t.mul(&t, &self.ctx);
            let vm1 = &v() - &RationalFunction::one();
            let rhs = t.scale(&vm1, &self.ctx).add(&Matrix::scalar(self.dim(), &v()), &self.ctx);
            lhs.compare(&rhs, &self.ctx, self.label())
        })
    }

    /// The braid relation for `(i, j)`, of length `n(i, j)`.
    pub fn check_braid(&self, i: usize, j: usize) -> Check {
        let m = self.cartan.orders[i][j] as usize;
        Check::run(format!("{}: braid T{}T{} (length {m})", self.name, i + 1, j + 1), || {
            let (ti, tj) = match (self.build_t(i), self.build_t(j)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return Some(error_failure(e)),
            };
            let word = |a: &Matrix, b: &Matrix| {
                let mut acc = a.clone();
                for step in 1..m {
                    acc = acc.mul(if step % 2 == 1 { b } else { a }, &self.ctx);
                }
                acc
            };
            word(&ti, &tj).compare(&word(&tj, &ti), &self.ctx, self.label())
        })
    }

    /// `θ_λ𝔗_i − 𝔗_iθ_{s_iλ} = (v − 1)(θ_λ − θ_{s_iλ})(1 − θ_{−n_iα_i∨})^{-1}`.
    ///
    /// The right side is diagonal; each entry is formed by exact polynomial
    /// division, and a failed division fails the check.
    pub fn check_bernstein(&self, lambda: &[i64], i: usize) -> Check {
        Check::run(format!("{}: Bernstein T{} with lambda={lambda:?}", self.name, i + 1), || {
            let c = &self.cartan;
            let t = match self.build_t(i) {
                Ok(t) => t,
                Err(e) => return Some(error_failure(e)),
            };
            let sl = c.reflect(i, lambda);
            let lhs = self.build_theta(lambda).mul(&t, &self.ctx).sub(&t.mul(&self.build_theta(&sl), &self.ctx), &self.ctx);
            let one = LaurentPoly::one();
            let vm1 = &v_poly() - &one;
            let mut diag = Vec::with_capacity(self.dim());
            for w in 0..c.order() {
                let num = &vm1 * &(&c.zpow(&c.eval_at_w(w, lambda)) - &c.zpow(&c.eval_at_w(w, &sl)));
                let den = &one - &c.zpow(&c.eval_at_w(w, &neg(&self.scaled_root(i))));
                let q = match num.exact_divide(&den) {
                    Ok(q) => q,
                    Err(_) => {
                        return Some(Failure {
                            location: format!("block w={}: right side not polynomial", word_label(&c.weyl.elements[w].word_string())),
                            lhs: num.to_string(),
                            rhs: den.to_string(),
                        })
                    }
                };
                diag.extend(std::iter::repeat(RationalFunction::from_poly(q)).take(self.k));
            }
            lhs.compare(&Matrix::diagonal(diag), &self.ctx, self.label())
        })
    }

    /// Block sparsity of `𝔗_i`: block `(y, w)` vanishes unless `y ∈ {w, s_i w}`.
    pub fn check_sparsity(&self, i: usize) -> Check {
        Check::run(format!("{}: block sparsity T{}", self.name, i + 1), || {
            let t = match self.build_t(i) {
                Ok(t) => t,
                Err(e) => return Some(error_failure(e)),
            };
            let g = &self.cartan.weyl;
            let found = t.iter().find_map(|(r, c, e)| {
                let (y, w) = (r / self.k, c / self.k);
                (y != w && y != g.left_mul(i, w)).then(|| Failure {
                    location: (self.label())(r, c),
                    lhs: e.to_string(),
                    rhs: "0".into(),
                })
            });
            found
        })
    }

    /// `θ_λ θ_μ = θ_{λ+μ}`.
    pub fn check_theta(&self, lambda: &[i64], mu: &[i64]) -> Check {
        Check::run(format!("{}: theta multiplicativity", self.name), || {
            let lhs = self.build_theta(lambda).mul(&self.build_theta(mu), &self.ctx);
            lhs.compare(&self.build_theta(&crate::roots::add(lambda, mu)), &self.ctx, self.label())
        })
    }

    /// `I°·I° = (Σ_w v^{ℓ(w)}) I°`.
    pub fn check_idempotent(&self) -> Check {
        Check::run(format!("{}: spherical idempotent", self.name), || {
            let s = match self.spherical_sum() {
                Ok(s) => s,
                Err(e) => return Some(error_failure(e)),
            };
            let p = poincare_rf(&self.cartan);
            s.mul(&s, &self.ctx).compare(&s.scale(&p, &self.ctx), &self.ctx, self.label())
        })
    }

    /// Composition, quadratic and braid relations, plus Bernstein for the given weights.
    pub fn verify(&self, bernstein: &[Weight]) -> Report {
        let mut r = Report::new(self.name.clone());
        r.push(self.check_composition());
        let rank = self.cartan.rank();
        for i in 0..rank {
            r.push(self.check_quadratic(i));
        }
        for i in 0..rank {
            for j in i + 1..rank {
                r.push(self.check_braid(i, j));
            }
        }
        for lambda in bernstein {
            for i in 0..rank {
                r.push(self.check_bernstein(lambda, i));
            }
        }
        r
    }

    /// The quadratic relation for each simple reflection, then the braid
    /// relation for each pair. Bernstein and composition are left out.
    pub fn check_relations(&self) -> Report {
        let mut r = Report::new(self.name.clone());
        let rank = self.cartan.rank();
        for i in 0..rank {
            r.push(self.check_quadratic(i));
        }
        for i in 0..rank {
            for j in i + 1..rank {
                r.push(self.check_braid(i, j));
            }
        }
        r
    }

    /// Replaces `A[(w, i)]` by `factor·A[(w, i)]`.
    pub fn perturbed(&self, w: usize, i: usize, factor: &RationalFunction) -> SchemaInstance {
        let mut out = self.clone();
        let a = out.a[&(w, i)].scale(factor, &self.ctx);
        out.a.insert((w, i), a);
        out.name = format!("{} (A[{},{}] scaled)", self.name, word_label(&self.cartan.weyl.elements[w].word_string()), i + 1);
        out
    }

    /// Replaces `A[(w, i)]` by a free symbol times the identity.
    pub fn with_free_entry(&self, w: usize, i: usize, name: &str) -> SchemaInstance {
        let mut out = self.clone();
        out.a.insert((w, i), Matrix::scalar(self.k, &RationalFunction::var(Symbol::new(name))));
        out.name = format!("{} (A[{},{}] free)", self.name, word_label(&self.cartan.weyl.elements[w].word_string()), i + 1);
        out
    }
}

fn word_label(s: &str) -> String {
    if s.is_empty() {
        "1".into()
    } else {
        format!("s{s}")
    }
}

fn missing(w: usize, i: usize) -> Failure {
    Failure { location: format!("A entry (w={w}, i={})", i + 1), lhs: "missing".into(), rhs: "present".into() }
}

fn error_failure(e: Error) -> Failure {
    Failure { location: "construction".into(), lhs: e.to_string(), rhs: String::new() }
}

/// `Σ_w v^{ℓ(w)}`.
pub fn poincare_rf(c: &CartanDatum) -> RationalFunction {
    let terms = c.weyl.poincare().into_iter().enumerate().map(|(l, n)| {
        (Monomial::from_pairs([(Symbol::u(), 2 * l as i32)]), crate::algebra::int(n as i64))
    });
    RationalFunction::from_poly(LaurentPoly::from_terms(terms))
}

/// `C(r) = (1 − v z^r) / (1 − z^r)`.
pub fn c_function(c: &CartanDatum, r: &[i64]) -> RationalFunction {
    let x = c.zpow(r);
    let one = LaurentPoly::one();
    RationalFunction::from_fraction(&one - &(&v_poly() * &x), &one - &x).expect("nonzero root")
}

/// Elimination formulas for the top-cell intertwiner symbol, forced by the
/// braid constraint.
fn elimination(t: CartanType) -> Option<(&'static str, &'static str)> {
    match t {
        CartanType::A(2) => Some(("a2_121", "a1_121*a2_21*a1_1*a1_12^-1*a2_2^-1")),
        CartanType::C2 => Some(("a2_2121", "a2_2*a1_12*a2_212*a1_2121*a1_1^-1*a2_21^-1*a1_121^-1")),
        CartanType::G2 => Some((
            "a2_212121",
            "a1_1212*a2_2*a2_21212*a1_12*a1_212121*a2_212*a2_2121^-1*a2_21^-1*a1_1^-1*a1_121^-1*a1_12121^-1",
        )),
        _ => None,
    }
}

/// Free-symbol instance with `k = 1`.
///
/// `A[(w, i)]` is the free symbol `a{i}_{word(w)}` when `s_i w ≤ w`; otherwise
/// it is `C(y⁻¹α_i)C(w⁻¹α_i)/A[(y, i)]` with `y = s_i w`, which forces the
/// composition scalar. For A2, C2 and G2 the top-cell symbol is then
/// eliminated through the braid constraint.
pub fn generic_instance(cartan: Arc<CartanDatum>) -> Result<SchemaInstance> {
    match cartan.cartan_type {
        CartanType::A(1) | CartanType::A(2) | CartanType::C2 | CartanType::G2 => {}
        t => return Err(Error::Unsupported(format!("generic instance for {t}"))),
    }
    let g = &cartan.weyl;
    let sym = |w: usize, i: usize| Symbol::new(&format!("a{}_{}", i + 1, g.elements[w].word_string()));
    let elim: Option<(Symbol, Monomial)> = elimination(cartan.cartan_type).map(|(name, formula)| {
        let p = crate::algebra::parse_poly(formula, None).expect("valid formula");
        (Symbol::new(name), p.as_term().expect("monomial").0.clone())
    });
    let free = |w: usize, i: usize| -> RationalFunction {
        let s = sym(w, i);
        match &elim {
            Some((e, m)) if *e == s => RationalFunction::monomial(m.clone()),
            _ => RationalFunction::var(s),
        }
    };
    let mut inst = SchemaInstance::new(format!("generic {}", cartan.cartan_type), cartan.clone(), 1, Ctx::plain());
    for w in 0..g.len() {
        for i in 0..cartan.rank() {
            let y = g.left_mul(i, w);
            let e = if g.bruhat_le(y, w) {
                free(w, i)
            } else {
                let alpha = &cartan.simple[i];
                let cy = c_function(&cartan, &cartan.eval_at_w(y, alpha));
                let cw = c_function(&cartan, &cartan.eval_at_w(w, alpha));
                &(&cy * &cw) / &free(y, i)
            };
            inst.a.insert((w, i), Matrix::scalar(1, &e));
        }
    }
    Ok(inst)
}
