//! R-matrices on tensor powers of `V = ℚ(u)^n`, their Yang–Baxter and
//! triangularity checks, Jimbo's Hecke action, the tensor-product schema
//! instance, its `z → 0` limit and the wreath construction.
//!
//! Basis vectors of `⊗^r V` are tensor words `(i_1, …, i_r)` with letters in
//! `0..n`, ordered lexicographically (the first slot is most significant).
//! Words are printed with 1-based letters.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{v, v_poly, Ctx, GaussOrientation, GaussRules, LaurentPoly, Monomial, RationalFunction, Symbol};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{Check, Failure, Report};
use crate::roots::{CartanDatum, Weight};
use crate::schema::SchemaInstance;

/// Index of a tensor word.
pub fn tensor_index(n: usize, word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &a| acc * n + a)
}

/// The tensor word with a given index.
pub fn tensor_word(n: usize, r: usize, mut idx: usize) -> Vec<usize> {
    let mut w = vec![0; r];
    for slot in (0..r).rev() {
        w[slot] = idx % n;
        idx /= n;
    }
    w
}

/// `"12"` for the word `(0, 1)`.
pub fn word_label(word: &[usize]) -> String {
    word.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join("")
}

/// An endomorphism of `⊗^r V`.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub n: usize,
    pub r: usize,
    pub matrix: Matrix,
}

impl TensorOperator {
    pub fn new(n: usize, r: usize, matrix: Matrix) -> Self {
        let d = n.pow(r as u32);
        assert_eq!((matrix.rows(), matrix.cols()), (d, d), "tensor operator shape");
        TensorOperator { n, r, matrix }
    }

    pub fn zeros(n: usize, r: usize) -> Self {
        let d = n.pow(r as u32);
        TensorOperator { n, r, matrix: Matrix::zeros(d, d) }
    }

    pub fn identity(n: usize, r: usize) -> Self {
        TensorOperator { n, r, matrix: Matrix::identity(n.pow(r as u32)) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> RationalFunction {
        self.matrix.get(tensor_index(self.n, row), tensor_index(self.n, col))
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], e: RationalFunction) {
        self.matrix.set(tensor_index(self.n, row), tensor_index(self.n, col), e);
    }

    pub fn compose(&self, other: &TensorOperator, ctx: &Ctx) -> TensorOperator {
        TensorOperator { n: self.n, r: self.r, matrix: self.matrix.mul(&other.matrix, ctx) }
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction + Sync) -> TensorOperator {
        TensorOperator { n: self.n, r: self.r, matrix: self.matrix.map(f) }
    }

    /// `τ ∘ self` for an operator on `V ⊗ V`, as a row permutation.
    pub fn flip_left(&self) -> TensorOperator {
        self.permute(true)
    }

    /// `self ∘ τ` for an operator on `V ⊗ V`, as a column permutation.
    pub fn flip_right(&self) -> TensorOperator {
        self.permute(false)
    }

    fn permute(&self, rows: bool) -> TensorOperator {
        assert_eq!(self.r, 2, "the flip acts on V ⊗ V");
        let n = self.n;
        let swap = |idx: usize| (idx % n) * n + idx / n;
        let mut out = TensorOperator::zeros(n, 2);
        for (i, j, e) in self.matrix.iter() {
            let (i, j) = if rows { (swap(i), j) } else { (i, swap(j)) };
            out.matrix.set(i, j, e.clone());
        }
        out
    }

    /// Places an operator on `V ⊗ V` on slots `(a, b)` of `⊗^r V`, its first
    /// factor on slot `a`, with the identity elsewhere.
    pub fn embed(&self, r: usize, a: usize, b: usize) -> TensorOperator {
        assert_eq!(self.r, 2, "embedding expects an operator on V ⊗ V");
        assert!(a != b && a < r && b < r, "invalid slots");
        let n = self.n;
        let mut out = TensorOperator::zeros(n, r);
        for row in 0..out.dim() {
            let word = tensor_word(n, r, row);
            let local = word[a] * n + word[b];
            for (&c, e) in self.matrix.row(local) {
                let mut col = word.clone();
                col[a] = c / n;
                col[b] = c % n;
                out.matrix.set(row, tensor_index(n, &col), e.clone());
            }
        }
        out
    }

    /// First entry whose row and column words differ in content.
    pub fn content_violation(&self) -> Option<(usize, usize)> {
        self.matrix.iter().map(|(i, j, _)| (i, j)).find(|&(i, j)| !same_content(self.n, self.r, i, j))
    }

    fn label(&self) -> impl Fn(usize, usize) -> String + Sync + '_ {
        move |i, j| format!("({}, {})", word_label(&tensor_word(self.n, self.r, i)), word_label(&tensor_word(self.n, self.r, j)))
    }

    pub fn compare(&self, other: &TensorOperator, ctx: &Ctx) -> Option<Failure> {
        self.matrix.compare(&other.matrix, ctx, self.label())
    }
}

fn same_content(n: usize, r: usize, i: usize, j: usize) -> bool {
    let mut a = tensor_word(n, r, i);
    let mut b = tensor_word(n, r, j);
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn u() -> RationalFunction {
    RationalFunction::var(Symbol::u())
}

fn u_inv() -> RationalFunction {
    RationalFunction::monomial(Monomial::from_pairs([(Symbol::u(), -1)]))
}

/// The spectral parameter `x` used by the symbolic checks.
pub fn x_symbol() -> Symbol {
    Symbol::new("x")
}

/// The second spectral parameter `y`.
pub fn y_symbol() -> Symbol {
    Symbol::new("y")
}

/// Dimension of `V` and the twisting parameters `γ_ij`.
///
/// Only the entries with `i < j` enter the R-matrices.
#[derive(Clone, Debug)]
pub struct RMatrixSpec {
    pub n: usize,
    pub gamma: Vec<Vec<RationalFunction>>,
    pub ctx: Ctx,
}

impl RMatrixSpec {
    pub fn untwisted(n: usize) -> Self {
        RMatrixSpec { n, gamma: vec![vec![RationalFunction::one(); n]; n], ctx: Ctx::plain() }
    }

    /// Free symbols `gamma{i}{j}` for `i < j`, with `γ_ji = γ_ij⁻¹`.
    pub fn symbolic(n: usize) -> Self {
        let mut s = Self::untwisted(n);
        for i in 0..n {
            for j in i + 1..n {
                let g = RationalFunction::var(Symbol::new(&format!("gamma{}{}", i + 1, j + 1)));
                s.gamma[j][i] = g.inv().expect("nonzero symbol");
                s.gamma[i][j] = g;
            }
        }
        s
    }

    /// `γ_ij = −g(i − j)/u` (or `−g(j − i)/u` in the conjugate orientation).
    pub fn gauss(n: usize, rules: GaussRules, orientation: GaussOrientation) -> Self {
        let mut s = Self::untwisted(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let g = RationalFunction::from_poly(rules.g(orientation.index(i as i64 - j as i64)));
                    s.gamma[i][j] = -&(&g * &u_inv());
                }
            }
        }
        s.ctx = Ctx::with_gauss(rules);
        s
    }

    pub fn is_untwisted(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.gamma[i][j].is_one()))
    }

    /// A copy with `γ_ij` (`i < j`) multiplied by `factor`.
    pub fn perturbed(&self, i: usize, j: usize, factor: &RationalFunction) -> Self {
        let mut s = self.clone();
        s.gamma[i][j] = self.ctx.mul(&self.gamma[i][j], factor);
        s
    }

    fn gamma_inv(&self, i: usize, j: usize) -> RationalFunction {
        let g = &self.gamma[i][j];
        self.ctx.normalize(g.inv().expect("nonzero twist"))
    }
}

/// `R^γ(x)`:
/// `Σ_i (u − x/u) e_ii⊗e_ii + Σ_{i<j} (1 − x)(γ_ij⁻¹ e_ii⊗e_jj + γ_ij e_jj⊗e_ii)
///  + (u − u⁻¹) Σ_{i>j} e_ij⊗e_ji + x(u − u⁻¹) Σ_{i<j} e_ij⊗e_ji`.
pub fn r_affine(spec: &RMatrixSpec, x: &RationalFunction) -> TensorOperator {
    let n = spec.n;
    let one = RationalFunction::one();
    let diag = &u() - &(x * &u_inv());
    let one_minus_x = &one - x;
    let off = &u() - &u_inv();
    let mut out = TensorOperator::zeros(n, 2);
    for i in 0..n {
        out.set(&[i, i], &[i, i], diag.clone());
        for j in i + 1..n {
            out.set(&[i, j], &[i, j], spec.ctx.mul(&spec.gamma_inv(i, j), &one_minus_x));
            out.set(&[j, i], &[j, i], spec.ctx.mul(&spec.gamma[i][j], &one_minus_x));
            out.set(&[j, i], &[i, j], off.clone());
            out.set(&[i, j], &[j, i], x * &off);
        }
    }
    out
}

/// The constant R-matrix `R^γ = R^γ(0)`.
pub fn r_gl(spec: &RMatrixSpec) -> TensorOperator {
    r_affine(spec, &RationalFunction::zero())
}

/// `R − x·τR⁻¹τ`, computed by exact inversion.
pub fn r_affine_from_inverse(spec: &RMatrixSpec, x: &RationalFunction) -> Result<TensorOperator> {
    let r = r_gl(spec);
    let inv = TensorOperator::new(spec.n, 2, r.matrix.inverse(&spec.ctx)?);
    let r21_inv = inv.flip_left().flip_right();
    Ok(TensorOperator::new(spec.n, 2, r.matrix.sub(&r21_inv.matrix.scale(x, &spec.ctx), &spec.ctx)))
}

/// `R̃(x)`, normalized so that `τR̃(x)·τR̃(x⁻¹) = 1`:
/// diagonal `(x − v)/(1 − vx)`, `e_ii⊗e_jj` (`i ≠ j`) `g(i − j)(1 − x)/(1 − vx)`,
/// `e_ij⊗e_ji` `(1 − v)/(1 − vx)` for `i > j` and `x(1 − v)/(1 − vx)` for `i < j`.
pub fn r_tilde(n: usize, x: &RationalFunction, rules: &GaussRules, orientation: GaussOrientation) -> TensorOperator {
    let one = RationalFunction::one();
    let den = (&one - &(&v() * x)).inv().expect("1 - vx is nonzero");
    let diag = &(x - &v()) * &den;
    let swap = &(&one - &v()) * &den;
    let mut out = TensorOperator::zeros(n, 2);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                out.set(&[i, i], &[i, i], diag.clone());
                continue;
            }
            let g = RationalFunction::from_poly(rules.g(orientation.index(i as i64 - j as i64)));
            out.set(&[i, j], &[i, j], &(&g * &(&one - x)) * &den);
            let e = if i > j { swap.clone() } else { x * &swap };
            out.set(&[i, j], &[j, i], e);
        }
    }
    out
}

/// `(u − x/u)(u − 1/(xu))`.
pub fn doubler_scalar(x: &RationalFunction) -> RationalFunction {
    let xi = x.inv().expect("nonzero parameter");
    &(&u() - &(x * &u_inv())) * &(&u() - &(&xi * &u_inv()))
}

/// `R_12 R_13 R_23 = R_23 R_13 R_12` on `V ⊗ V ⊗ V`.
pub fn check_ybe(name: &str, r: &TensorOperator, ctx: &Ctx) -> Check {
    Check::run(format!("{name}: Yang-Baxter"), || {
        let (r12, r13, r23) = (r.embed(3, 0, 1), r.embed(3, 0, 2), r.embed(3, 1, 2));
        let lhs = r12.compose(&r13, ctx).compose(&r23, ctx);
        let rhs = r23.compose(&r13, ctx).compose(&r12, ctx);
        lhs.compare(&rhs, ctx)
    })
}

/// `R_12(x) R_13(xy) R_23(y) = R_23(y) R_13(xy) R_12(x)` with symbolic `x, y`.
pub fn check_pybe(name: &str, r: impl Fn(&RationalFunction) -> TensorOperator, ctx: &Ctx) -> Check {
    Check::run(format!("{name}: parametrized Yang-Baxter"), || {
        let x = RationalFunction::var(x_symbol());
        let y = RationalFunction::var(y_symbol());
        let r12 = r(&x).embed(3, 0, 1);
        let r13 = r(&(&x * &y)).embed(3, 0, 2);
        let r23 = r(&y).embed(3, 1, 2);
        let lhs = r12.compose(&r13, ctx).compose(&r23, ctx);
        let rhs = r23.compose(&r13, ctx).compose(&r12, ctx);
        lhs.compare(&rhs, ctx)
    })
}

/// `τr(x) ∘ τr(x⁻¹) = expected(x)·I` with symbolic `x`.
pub fn check_triangularity(
    name: &str,
    r: impl Fn(&RationalFunction) -> TensorOperator,
    expected: impl Fn(&RationalFunction) -> RationalFunction,
    ctx: &Ctx,
) -> Check {
    Check::run(format!("{name}: triangularity"), || {
        let x = RationalFunction::var(x_symbol());
        let xi = x.inv().expect("nonzero symbol");
        let a = r(&x).flip_left();
        let lhs = a.compose(&r(&xi).flip_left(), ctx);
        let rhs = TensorOperator::new(a.n, 2, Matrix::scalar(a.dim(), &expected(&x)));
        lhs.compare(&rhs, ctx)
    })
}

/// `R^γ(x)` at `x = 0` equals the constant `R^γ`.
pub fn check_zero_limit(name: &str, spec: &RMatrixSpec) -> Check {
    Check::run(format!("{name}: R(0) = R"), || {
        let x = x_symbol();
        let lim = r_affine(spec, &RationalFunction::var(x))
            .map(|e| e.substitute_rf(x, &RationalFunction::zero()).expect("polynomial in x"));
        lim.compare(&r_gl(spec), &spec.ctx)
    })
}

/// The closed formula for `R(x)` agrees with `R − x·τR⁻¹τ`.
pub fn check_affinization(name: &str, spec: &RMatrixSpec) -> Check {
    Check::run(format!("{name}: R(x) = R - x R21^-1"), || {
        let x = RationalFunction::var(x_symbol());
        match r_affine_from_inverse(spec, &x) {
            Ok(oracle) => r_affine(spec, &x).compare(&oracle, &spec.ctx),
            Err(e) => Some(Failure { location: "inverse".into(), lhs: e.to_string(), rhs: String::new() }),
        }
    })
}

/// `R̃(x) = −u/(1 − vx)·R^γ(x)` for a Gauss-twisted `spec`.
///
/// The identity holds when `spec` uses the orientation opposite to the one
/// passed to `r_tilde`; a single rescaled `γ_ij` breaks it.
pub fn check_normalized_dictionary(name: &str, spec: &RMatrixSpec, orientation: GaussOrientation) -> Check {
    Check::run(format!("{name}: normalized R against twisted R"), || {
        let Some(rules) = spec.ctx.gauss() else {
            return Some(Failure { location: "spec".into(), lhs: "untwisted".into(), rhs: "Gauss twist".into() });
        };
        let x = RationalFunction::var(x_symbol());
        let one = RationalFunction::one();
        let factor = &(-&u()) * &(&one - &(&v() * &x)).inv().expect("1 - vx is nonzero");
        let scaled = r_affine(spec, &x).map(|e| spec.ctx.mul(e, &factor));
        r_tilde(spec.n, &x, rules, orientation).compare(&scaled, &spec.ctx)
    })
}

/// `T_i = u·(τR)_{i,i+1}` on `⊗^r V`, for `i = 0..r−1`.
pub fn jimbo_action(spec: &RMatrixSpec, r: usize) -> Vec<Matrix> {
    let t = r_gl(spec).flip_left().map(|e| e * &u());
    (0..r.saturating_sub(1)).map(|i| t.embed(r, i, i + 1).matrix).collect()
}

/// Quadratic and braid relations for operators indexed by the simple
/// reflections of `cartan`.
pub fn hecke_report(name: &str, ops: &[Matrix], cartan: &CartanDatum, ctx: &Ctx) -> Report {
    let mut report = Report::new(name);
    let vm1 = &v() - &RationalFunction::one();
    let label = |i: usize, j: usize| format!("({i}, {j})");
    for (i, t) in ops.iter().enumerate() {
        report.push(Check::run(format!("{name}: quadratic T{}", i + 1), || {
            let rhs = t.scale(&vm1, ctx).add(&Matrix::scalar(t.rows(), &v()), ctx);
            t.mul(t, ctx).compare(&rhs, ctx, label)
        }));
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let m = cartan.orders[i][j] as usize;
            report.push(Check::run(format!("{name}: braid T{}T{} (length {m})", i + 1, j + 1), || {
                let word = |a: &Matrix, b: &Matrix| {
                    let mut acc = a.clone();
                    for step in 1..m {
                        acc = acc.mul(if step % 2 == 1 { b } else { a }, ctx);
                    }
                    acc
                };
                word(&ops[i], &ops[j]).compare(&word(&ops[j], &ops[i]), ctx, label)
            }));
        }
    }
    report
}

/// Hecke relations for `u·τR` on `V ⊗ V` and `⊗³ V`.
pub fn check_hecke(name: &str, spec: &RMatrixSpec) -> Report {
    hecke_report(name, &jimbo_action(spec, 3), &CartanDatum::gl(3), &spec.ctx)
}

/// Whether the tensor instance is twisted by Gauss sums.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Twist {
    #[default]
    None,
    Gauss,
}

/// Options for [`tensor_schema_instance`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TensorSchemaOptions {
    pub twist: Twist,
    /// Evaluate at `x = (wz)^{n α_i∨}` (the cover variant) instead of `(wz)^{α_i∨}`.
    pub cover_power: bool,
    pub orientation: GaussOrientation,
    /// Multiply every `A` entry by `ξ(x) = x^m`; `ξ(x)ξ(x⁻¹) = 1`.
    pub xi_power: i32,
}

/// The schema instance on `⊗^r V` for `GL_r`.
///
/// Without the cover power, `A(w, i) = u/(1 − x)·(τR^γ(x))_{i,i+1}` with
/// `x = (wz)^{α_i∨}`. With it and Gauss twisting, `A(w, i) = (1 − vx)/(1 − x)
/// ·(τR̃(x))_{i,i+1}` with `x = (wz)^{nα_i∨}`.
pub fn tensor_schema_instance(n: usize, r: usize, opts: TensorSchemaOptions) -> Result<SchemaInstance> {
    if n == 0 || r < 2 {
        return Err(Error::Unsupported(format!("tensor instance needs n >= 1 and r >= 2 (got n = {n}, r = {r})")));
    }
    let cartan = Arc::new(CartanDatum::gl(r));
    let spec = match opts.twist {
        Twist::None => RMatrixSpec::untwisted(n),
        Twist::Gauss => RMatrixSpec::gauss(n, GaussRules::new(n as u32), opts.orientation),
    };
    let mut name = format!("tensor n={n} r={r}");
    if opts.twist == Twist::Gauss {
        name.push_str(" gauss");
    }
    if opts.cover_power {
        name.push_str(" cover");
    }
    let mut inst = SchemaInstance::new(name, cartan.clone(), n.pow(r as u32), spec.ctx.clone());
    if opts.cover_power {
        inst.root_scale = vec![n as i64; cartan.rank()];
    }
    let one = LaurentPoly::one();
    let mut entries = HashMap::new();
    for w in 0..cartan.order() {
        for i in 0..cartan.rank() {
            let xp = inst.x_at(w, i);
            let x = RationalFunction::from_poly(xp.clone());
            let (scalar, op) = if opts.cover_power && opts.twist == Twist::Gauss {
                let rules = spec.ctx.gauss().expect("Gauss rules");
                let s = RationalFunction::from_fraction(&one - &(&v_poly() * &xp), &one - &xp).expect("regular");
                (s, r_tilde(n, &x, rules, opts.orientation))
            } else {
                let s = RationalFunction::from_fraction(LaurentPoly::var(Symbol::u()), &one - &xp).expect("regular");
                (s, r_affine(&spec, &x))
            };
            let xi = x.pow(opts.xi_power)?;
            let scalar = &scalar * &xi;
            let a = op.flip_left().embed(r, i, i + 1).matrix.scale(&scalar, &spec.ctx);
            entries.insert((w, i), a);
        }
    }
    inst.a = entries;
    Ok(inst)
}

/// Bernstein weights for a tensor instance: `e_j`, scaled by the root
/// scale for the cover variant.
pub fn tensor_bernstein_weights(inst: &SchemaInstance) -> Vec<Weight> {
    let d = inst.cartan.dim;
    let s = inst.root_scale.first().copied().unwrap_or(1);
    (0..d)
        .map(|j| {
            let mut e = vec![0; d];
            e[j] = s;
            e
        })
        .collect()
}

/// Every `𝔗_i` of a tensor instance preserves the content of tensor words.
pub fn check_content(inst: &SchemaInstance, n: usize, r: usize) -> Check {
    Check::run(format!("{}: weight preservation", inst.name), || {
        let k = inst.k;
        for i in 0..inst.cartan.rank() {
            let t = match inst.build_t(i) {
                Ok(t) => t,
                Err(e) => return Some(Failure { location: "construction".into(), lhs: e.to_string(), rhs: String::new() }),
            };
            let bad = t.iter().find(|&(a, b, _)| !same_content(n, r, a % k, b % k)).map(|(a, b, e)| (a, b, e.to_string()));
            if let Some((a, b, e)) = bad {
                return Some(Failure {
                    location: format!(
                        "T{} entry ({}, {})",
                        i + 1,
                        word_label(&tensor_word(n, r, a % k)),
                        word_label(&tensor_word(n, r, b % k))
                    ),
                    lhs: e,
                    rhs: "0".into(),
                });
            }
        }
        None
    })
}

/// The `z → 0` specialization of the untwisted tensor instance.
#[derive(Clone, Debug)]
pub struct LimitInstance {
    pub cartan: Arc<CartanDatum>,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub ops: Vec<Matrix>,
}

/// Substitutes `z_j ↦ t^{r−j} z_j` in the operators `𝔗_i` and lets `t → 0`,
/// so that `(wz)^{α_i∨} → 0` exactly when `s_i w > w`.
pub fn limit_instance(n: usize, r: usize) -> Result<LimitInstance> {
    let inst = tensor_schema_instance(n, r, TensorSchemaOptions::default())?;
    let t = Symbol::new("t");
    let z = inst.cartan.z();
    let map: HashMap<Symbol, Monomial> =
        z.iter().enumerate().map(|(j, &s)| (s, Monomial::from_pairs([(s, 1), (t, (r - 1 - j) as i32)]))).collect();
    let mut ops = Vec::new();
    for i in 0..inst.cartan.rank() {
        let op = inst.build_t(i)?;
        let mut out = Matrix::zeros(op.rows(), op.cols());
        for (a, b, e) in op.iter() {
            out.set(a, b, e.substitute_monomials(&map)?.limit_at_zero(t)?);
        }
        ops.push(out);
    }
    Ok(LimitInstance { cartan: inst.cartan.clone(), k: inst.k, n, r, ops })
}

impl LimitInstance {
    pub fn check_relations(&self) -> Report {
        hecke_report(&format!("limit n={} r={}", self.n, self.r), &self.ops, &self.cartan, &Ctx::plain())
    }

    /// Diagonal blocks are `(v − 1)·I` when `s_i w < w` and zero otherwise.
    pub fn check_diagonal(&self) -> Check {
        Check::run(format!("limit n={} r={}: diagonal blocks", self.n, self.r), || {
            let g = &self.cartan.weyl;
            let vm1 = &v() - &RationalFunction::one();
            for (i, t) in self.ops.iter().enumerate() {
                for w in 0..g.len() {
                    let expected = if g.length(g.left_mul(i, w)) < g.length(w) { vm1.clone() } else { RationalFunction::zero() };
                    let block = t.block(w * self.k, w * self.k, self.k, self.k);
                    if let Some(mut f) = block.compare(&Matrix::scalar(self.k, &expected), &Ctx::plain(), |a, b| format!("({a}, {b})")) {
                        f.location = format!("T{} block w={}: {}", i + 1, g.elements[w].word_string(), f.location);
                        return Some(f);
                    }
                }
            }
            None
        })
    }

    /// No entry depends on `z`.
    pub fn is_z_free(&self) -> bool {
        let z = self.cartan.z();
        self.ops.iter().all(|t| t.iter().all(|(_, _, e)| e.symbols().iter().all(|s| !z.contains(s))))
    }
}

/// The wreath module `W·U` of a Hecke module `U`.
#[derive(Clone, Debug)]
pub struct WreathModule {
    pub cartan: Arc<CartanDatum>,
    pub k: usize,
    pub u_ops: Vec<Matrix>,
    pub ctx: Ctx,
}

impl WreathModule {
    /// Fails unless the input operators satisfy the Hecke relations.
    pub fn new(cartan: Arc<CartanDatum>, u_ops: Vec<Matrix>, ctx: Ctx) -> Result<Self> {
        if u_ops.len() != cartan.rank() {
            return Err(Error::Invalid(format!("expected {} operators, got {}", cartan.rank(), u_ops.len())));
        }
        let k = u_ops.first().map_or(1, |m| m.rows());
        let report = hecke_report("input module", &u_ops, &cartan, &ctx);
        if let Some((name, f)) = report.first_failure() {
            return Err(Error::Invalid(format!("{name} fails at {}", f.location)));
        }
        Ok(WreathModule { cartan, k, u_ops, ctx })
    }

    pub fn dim(&self) -> usize {
        self.k * self.cartan.order()
    }

    /// `T_i⁻¹ = (T_i − (v − 1))/v`.
    pub fn inverse_op(&self, i: usize) -> Matrix {
        let vm1 = &v() - &RationalFunction::one();
        let vi = v().inv().expect("v is nonzero");
        self.u_ops[i].sub(&Matrix::scalar(self.k, &vm1), &self.ctx).scale(&vi, &self.ctx)
    }

    /// `T_i^* = −v T_i⁻¹ = (v − 1) − T_i`.
    pub fn star_op(&self, i: usize) -> Matrix {
        let vm1 = &v() - &RationalFunction::one();
        Matrix::scalar(self.k, &vm1).sub(&self.u_ops[i], &self.ctx)
    }

    pub fn star_ops(&self) -> Vec<Matrix> {
        (0..self.u_ops.len()).map(|i| self.star_op(i)).collect()
    }

    /// `𝔗_i`: `(𝔗_iφ)_w = T_iφ_{s_iw}` if `s_iw < w`, and
    /// `(v − 1)φ_w + vT_i⁻¹φ_{s_iw}` if `s_iw > w`.
    pub fn op(&self, i: usize) -> Matrix {
        let g = &self.cartan.weyl;
        let k = self.k;
        let vm1 = &v() - &RationalFunction::one();
        let v_tinv = self.inverse_op(i).scale(&v(), &self.ctx);
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for w in 0..g.len() {
            let y = g.left_mul(i, w);
            if g.length(y) < g.length(w) {
                out.set_block(w * k, y * k, &self.u_ops[i]);
            } else {
                out.set_block(w * k, w * k, &Matrix::scalar(k, &vm1));
                out.set_block(w * k, y * k, &v_tinv);
            }
        }
        out
    }

    pub fn ops(&self) -> Vec<Matrix> {
        (0..self.cartan.rank()).map(|i| self.op(i)).collect()
    }

    /// `Δ(φ)_w = φ`.
    pub fn delta(&self) -> Matrix {
        self.weighted_diagonal(|_| Matrix::identity(self.k))
    }

    /// The scalar-weighted map `φ ↦ ((−v)^{ℓ(w)}φ)_w`. It intertwines `T_i^*`
    /// with `𝔗_i` on the `v`-eigenspace of `T_i` only.
    pub fn delta_star_scalar(&self) -> Matrix {
        let g = &self.cartan.weyl;
        self.weighted_diagonal(|w| {
            let l = g.length(w) as u32;
            let p = RationalFunction::from_poly(v_poly().pow(l));
            Matrix::scalar(self.k, &if l % 2 == 1 { -p } else { p })
        })
    }

    /// `Δ*(φ)_w = T_w (T_w^*)⁻¹ φ = (−v)^{−ℓ(w)} T_w T_{w⁻¹} φ`, which
    /// intertwines `T_i^*` on `U` with `𝔗_i`.
    pub fn delta_star(&self) -> Matrix {
        let g = &self.cartan.weyl;
        self.weighted_diagonal(|w| {
            let word = &g.elements[w].word;
            let mut m = Matrix::identity(self.k);
            for &i in word.iter().chain(word.iter().rev()) {
                m = m.mul(&self.u_ops[i], &self.ctx);
            }
            let l = word.len() as u32;
            let p = RationalFunction::from_poly(v_poly().pow(l)).inv().expect("v is nonzero");
            m.scale(&if l % 2 == 1 { -p } else { p }, &self.ctx)
        })
    }

    fn weighted_diagonal(&self, weight: impl Fn(usize) -> Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.dim(), self.k);
        for w in 0..self.cartan.order() {
            out.set_block(w * self.k, 0, &weight(w));
        }
        out
    }

    pub fn check_relations(&self, name: &str) -> Report {
        hecke_report(&format!("{name}: wreath"), &self.ops(), &self.cartan, &self.ctx)
    }

    /// `𝔗_i Δ = Δ T_i` for every `i`.
    pub fn check_delta(&self, name: &str) -> Check {
        Check::run(format!("{name}: diagonal map intertwines"), || {
            let d = self.delta();
            (0..self.cartan.rank()).find_map(|i| {
                self.op(i).mul(&d, &self.ctx).compare(&d.mul(&self.u_ops[i], &self.ctx), &self.ctx, |a, b| format!("T{} ({a}, {b})", i + 1))
            })
        })
    }

    /// `𝔗_i Δ* = Δ* T_i^*` for every `i`.
    pub fn check_delta_star(&self, name: &str) -> Check {
        self.star_intertwining(format!("{name}: twisted diagonal map intertwines"), &self.delta_star())
    }

    /// The same identity for the scalar-weighted map.
    pub fn check_delta_star_scalar(&self, name: &str) -> Check {
        self.star_intertwining(format!("{name}: scalar-weighted twisted diagonal map intertwines"), &self.delta_star_scalar())
    }

    fn star_intertwining(&self, name: String, d: &Matrix) -> Check {
        Check::run(name, || {
            (0..self.cartan.rank()).find_map(|i| {
                self.op(i).mul(d, &self.ctx).compare(&d.mul(&self.star_op(i), &self.ctx), &self.ctx, |a, b| format!("T{} ({a}, {b})", i + 1))
            })
        })
    }

    /// On a vector with `T_iφ = −φ`: `T_i^*φ = vφ` and `𝔗_iΔ*(φ) = vΔ*(φ)`.
    pub fn check_star_eigenvector(&self, name: &str) -> Check {
        Check::run(format!("{name}: eigenvalue -1 vectors"), || {
            let ds = self.delta_star();
            for i in 0..self.cartan.rank() {
                // Columns of T_i − v span the (−1)-eigenspace.
                let p = self.u_ops[i].sub(&Matrix::scalar(self.k, &v()), &self.ctx);
                let Some(col) = (0..self.k).find(|&c| (0..self.k).any(|rr| p.entry(rr, c).is_some())) else {
                    continue;
                };
                let phi = p.block(0, col, self.k, 1);
                let t_phi = self.u_ops[i].mul(&phi, &self.ctx);
                let lbl = |a: usize, b: usize| format!("T{} ({a}, {b})", i + 1);
                if let Some(f) = t_phi.compare(&phi.scale(&-RationalFunction::one(), &self.ctx), &self.ctx, lbl) {
                    return Some(f);
                }
                if let Some(f) = self.star_op(i).mul(&phi, &self.ctx).compare(&phi.scale(&v(), &self.ctx), &self.ctx, lbl) {
                    return Some(f);
                }
                let lhs = self.op(i).mul(&ds.mul(&phi, &self.ctx), &self.ctx);
                let rhs = ds.mul(&phi, &self.ctx).scale(&v(), &self.ctx);
                if let Some(f) = lhs.compare(&rhs, &self.ctx, lbl) {
                    return Some(f);
                }
            }
            None
        })
    }

    /// Parts (i) to (iii): relations, `Δ`, `Δ*` and the eigenvector form.
    pub fn verify(&self, name: &str) -> Report {
        let mut r = self.check_relations(name);
        r.push(self.check_delta(name));
        r.push(self.check_delta_star(name));
        r.push(self.check_star_eigenvector(name));
        r
    }
}

/// `(Ωφ)_w = (−1)^{ℓ(w)} φ_{w w0}` on `W·U`.
pub fn reflection_sign_map(cartan: &CartanDatum, k: usize) -> Matrix {
    let g = &cartan.weyl;
    let w0 = g.longest();
    let mut out = Matrix::zeros(k * g.len(), k * g.len());
    for w in 0..g.len() {
        let c = if g.length(w) % 2 == 0 { RationalFunction::one() } else { -RationalFunction::one() };
        out.set_block(w * k, g.mul(w, w0) * k, &Matrix::scalar(k, &c));
    }
    out
}

/// Compares the `z → 0` limit with wreath modules of the Jimbo module `U`.
///
/// The checks are: the limit operators satisfy the Hecke relations, their
/// diagonal blocks follow the descent pattern, `U` satisfies parts (i) to
/// (iii) of the wreath construction, and `Ω L_i = 𝔗_i^{U*} Ω`, where `U*` is
/// `U` twisted by `T ↦ −vT⁻¹`.
pub fn limit_wreath_report(n: usize, r: usize) -> Result<Report> {
    let lim = limit_instance(n, r)?;
    let spec = RMatrixSpec::untwisted(n);
    let ctx = Ctx::plain();
    let jimbo = WreathModule::new(lim.cartan.clone(), jimbo_action(&spec, r), ctx.clone())?;
    let star = WreathModule::new(lim.cartan.clone(), jimbo.star_ops(), ctx.clone())?;
    let name = format!("limit n={n} r={r}");
    let mut report = lim.check_relations();
    report.push(lim.check_diagonal());
    report.push(Check::from_bool(format!("{name}: free of z"), lim.is_z_free(), || Failure {
        location: "entries".into(),
        lhs: "depends on z".into(),
        rhs: "constant".into(),
    }));
    report.extend(jimbo.verify(&format!("Jimbo n={n} r={r}")));
    let omega = reflection_sign_map(&lim.cartan, lim.k);
    for (i, l) in lim.ops.iter().enumerate() {
        report.push(Check::run(format!("{name}: matches wreath of twisted Jimbo module, T{}", i + 1), || {
            omega.mul(l, &ctx).compare(&star.op(i).mul(&omega, &ctx), &ctx, |a, b| format!("({a}, {b})"))
        }));
    }
    Ok(report)
}

/// Whether the limit operators coincide entry for entry with the wreath of
/// the untwisted Jimbo module.
pub fn limit_equals_plain_wreath(n: usize, r: usize) -> Result<bool> {
    let lim = limit_instance(n, r)?;
    let ctx = Ctx::plain();
    let jimbo = WreathModule::new(lim.cartan.clone(), jimbo_action(&RMatrixSpec::untwisted(n), r), ctx.clone())?;
    Ok(lim.ops.iter().enumerate().all(|(i, l)| l.equals(&jimbo.op(i), &ctx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_round_trip() {
        for idx in 0..27 {
            assert_eq!(tensor_index(3, &tensor_word(3, 3, idx)), idx);
        }
        assert_eq!(word_label(&tensor_word(2, 2, 1)), "12");
    }

    #[test]
    fn embed_on_outer_slots() {
        let spec = RMatrixSpec::untwisted(2);
        let r13 = r_gl(&spec).embed(3, 0, 2);
        assert_eq!(r13.get(&[1, 0, 0], &[0, 0, 1]), &u() - &u_inv());
        assert!(r13.get(&[1, 0, 0], &[0, 1, 1]).is_zero());
    }

    #[test]
    fn n1_scalars() {
        let spec = RMatrixSpec::untwisted(1);
        assert_eq!(r_gl(&spec).matrix.get(0, 0).to_string(), "u");
        let x = RationalFunction::var(x_symbol());
        assert_eq!(r_affine(&spec, &x).matrix.get(0, 0), &u() - &(&x * &u_inv()));
    }
}
