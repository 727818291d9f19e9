//! Command implementations behind the `hecke` binary.
//!
//! Each `run_*` function returns an [`Output`]: the verifier reports it ran plus
//! a list of labelled renderings (polynomials, tables, scalars). The binary only
//! formats an `Output` as text or JSON, so the verdict printed on the command
//! line is the verdict of the in-process verifier.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use hecke::metaplectic::{dot_form, verify_cover};
use hecke::rmatrix::{
    check_content, check_hecke, check_pybe, check_triangularity, check_ybe, doubler_scalar, jimbo_action,
    limit_wreath_report, r_affine, r_gl, r_tilde, tensor_bernstein_weights, tensor_schema_instance, x_symbol,
};
use hecke::roots::{neg, Mat};
use hecke::schema::generic_instance;
use hecke::whittaker::{
    braid_holds, cs_rhs, idempotent_apply, monomial_basis, quadratic_holds, spherical_schema_instance,
    whittaker_schema_instance,
};
use hecke::{
    CartanDatum, CartanType, Check, Ctx, DemazureKind, DemazureVariant, Error, Failure, GaussOrientation, GaussRules,
    LaurentPoly, Matrix, MetaplecticDatum, RMatrixSpec, RationalFunction, Report, Result, Status, TauKind,
    TensorSchemaOptions, Twist, Weight, WreathModule,
};

pub use hecke::parse_poly;

/// Largest `n` accepted by the R-matrix commands.
pub const MAX_N: usize = 4;
/// Largest number of tensor factors accepted by the schema and wreath commands.
pub const MAX_R: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub command: String,
    pub status: Status,
    pub reports: Vec<Report>,
    #[serde(default)]
    pub details: Vec<Detail>,
}

impl Output {
    fn new(command: &str) -> Self {
        Output { command: command.into(), status: Status::Pass, reports: Vec::new(), details: Vec::new() }
    }

    fn report(&mut self, r: Report) {
        if !r.passed() {
            self.status = Status::Fail;
        }
        self.reports.push(r);
    }

    fn detail(&mut self, label: impl Into<String>, value: impl ToString) {
        self.details.push(Detail { label: label.into(), value: value.to_string() });
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for d in &self.details {
            let _ = writeln!(s, "{}: {}", d.label, d.value);
        }
        for r in &self.reports {
            s.push_str(&r.to_text());
        }
        let verdict = if self.passed() { "pass" } else { "fail" };
        let _ = writeln!(s, "status: {verdict}");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output serializes")
    }
}

/// Parses `(1,0,-1)`, `[1, 0, -1]` or `1,0,-1`.
pub fn parse_weight(src: &str) -> Result<Weight> {
    let inner = src.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("weight component `{}` in `{src}`", t.trim()))))
        .collect()
}

/// `dot` or a JSON integer matrix such as `[[2,0],[0,2]]`.
pub fn parse_form(src: &str, dim: usize) -> Result<Mat> {
    if src.trim().eq_ignore_ascii_case("dot") {
        return Ok(dot_form(dim));
    }
    serde_json::from_str(src).map_err(|e| Error::Invalid(format!("bilinear form `{src}`: {e}")))
}

fn datum(t: CartanType) -> Result<Arc<CartanDatum>> {
    Ok(Arc::new(CartanDatum::new(t)?))
}

fn check_dim(c: &CartanDatum, w: &[i64]) -> Result<()> {
    if w.len() != c.dim {
        return Err(Error::Invalid(format!("weight {w:?} has {} coordinates, {} expects {}", w.len(), c.cartan_type, c.dim)));
    }
    Ok(())
}

fn gl_rank(t: CartanType) -> Result<usize> {
    match t {
        CartanType::A(r) => Ok(r + 1),
        t => Err(Error::Unsupported(format!("{t} has no tensor-space model; use A1..A3"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Generic,
    Whittaker,
    Spherical,
    Metaplectic,
    RMatrix,
}

pub struct VerifyArgs {
    pub cartan_type: CartanType,
    pub instance: InstanceKind,
    pub bernstein: Vec<Weight>,
    pub n: u32,
    pub form: String,
    pub orientation: GaussOrientation,
    pub gauss: bool,
}

/// Quadratic, braid and Bernstein checks on one schema instance.
pub fn run_verify(a: &VerifyArgs) -> Result<Output> {
    let c = datum(a.cartan_type)?;
    for w in &a.bernstein {
        check_dim(&c, w)?;
    }
    let mut out = Output::new("verify");
    match a.instance {
        InstanceKind::Generic => {
            if !a.bernstein.is_empty() {
                return Err(Error::Unsupported("Bernstein checks need a concrete instance, not generic symbols".into()));
            }
            let r = generic_instance(c)?.check_relations();
            let flags: Vec<&str> = r.checks.iter().map(|c| if c.passed { "True" } else { "False" }).collect();
            out.detail("relations", format!("[{}]", flags.join(", ")));
            out.report(r);
        }
        InstanceKind::Whittaker | InstanceKind::Spherical => {
            let inst = if a.instance == InstanceKind::Whittaker {
                whittaker_schema_instance(c.clone())
            } else {
                spherical_schema_instance(c.clone())
            };
            let weights = if a.bernstein.is_empty() { c.lattice_basis.clone() } else { a.bernstein.clone() };
            out.report(inst.verify(&weights));
        }
        InstanceKind::Metaplectic => {
            let d = MetaplecticDatum::new(c.clone(), a.n, parse_form(&a.form, c.dim)?)?.with_orientation(a.orientation);
            if a.bernstein.is_empty() {
                out.report(verify_cover(&d)?);
            } else {
                for w in &a.bernstein {
                    if !d.in_sublattice(w)? {
                        return Err(Error::Invalid(format!("{w:?} is not in the n-th sublattice")));
                    }
                }
                let mut r = d.schema_instance()?.verify(&a.bernstein);
                r.push(d.check_z_dependence());
                out.report(r);
            }
        }
        InstanceKind::RMatrix => {
            let r = gl_rank(a.cartan_type)?;
            let n = a.n as usize;
            if !(1..=MAX_N).contains(&n) || r > MAX_R {
                return Err(Error::Unsupported(format!("tensor schema needs n <= {MAX_N} and r <= {MAX_R}")));
            }
            let twist = if a.gauss { Twist::Gauss } else { Twist::None };
            let inst = tensor_schema_instance(n, r, TensorSchemaOptions { twist, orientation: a.orientation, ..Default::default() })?;
            let weights = if a.bernstein.is_empty() { tensor_bernstein_weights(&inst) } else { a.bernstein.clone() };
            let mut rep = inst.verify(&weights);
            rep.push(check_content(&inst, n, r));
            out.report(rep);
        }
    }
    Ok(out)
}

/// `𝓘°(z^λ)` against `∏(1 − v z^{−α∨})·χ_λ`.
pub fn run_cs(t: CartanType, lambda: &[i64]) -> Result<Output> {
    let c = datum(t)?;
    check_dim(&c, lambda)?;
    let lhs = idempotent_apply(c.clone(), lambda)?;
    let chi = c.weyl_character(lambda)?;
    let rhs = cs_rhs(&c, lambda)?;
    let v = hecke::algebra::v_poly();
    let factors: Vec<LaurentPoly> = c.positive.iter().map(|a| &LaurentPoly::one() - &(&v * &c.zpow(&neg(a)))).collect();
    let expanded = factors.iter().fold(chi.clone(), |acc, f| &acc * f);

    let mut out = Output::new("cs");
    out.detail("lambda", format!("{lambda:?}"));
    out.detail("I(z^lambda)", &lhs);
    let shown: Vec<String> = factors.iter().map(|f| format!("({f})")).collect();
    out.detail("right side", format!("{} * ({chi})", shown.join(" * ")));
    let mut r = Report::new(format!("Casselman-Shalika {t} {lambda:?}"));
    r.push(Check::from_bool("factored form expands to the right side", expanded == rhs, || Failure {
        location: "expansion".into(),
        lhs: expanded.to_string(),
        rhs: rhs.to_string(),
    }));
    r.push(Check::from_bool("idempotent equals right side", lhs == rhs, || Failure {
        location: format!("lambda = {lambda:?}"),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }));
    out.report(r);
    Ok(out)
}

pub struct DemazureArgs {
    pub cartan_type: CartanType,
    pub kind: DemazureKind,
    pub bound: i64,
    pub poly: Option<String>,
    pub word: Vec<usize>,
}

/// Relations of one Demazure-type operator family, and optionally its action on a polynomial.
pub fn run_demazure(a: &DemazureArgs) -> Result<Output> {
    let c = datum(a.cartan_type)?;
    let var = DemazureVariant::new(a.kind, c.clone());
    let mut out = Output::new("demazure");
    if let Some(src) = &a.poly {
        let syms = c.z();
        let f = parse_poly(src, Some(&syms))?;
        if let Some(&bad) = a.word.iter().find(|&&i| i == 0 || i > c.rank()) {
            return Err(Error::Invalid(format!("simple reflection {bad} out of range 1..={}", c.rank())));
        }
        let word: Vec<usize> = a.word.iter().map(|i| i - 1).collect();
        out.detail("f", &f);
        let label = a.word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        out.detail(format!("T[{label}] f"), var.apply_word(&word, &f)?);
    }
    let mut r = Report::new(format!("{:?} operators on {}", a.kind, c.cartan_type));
    let rho = match a.kind {
        DemazureKind::Whittaker => neg(&c.rho),
        _ => c.rho.clone(),
    };
    if a.kind != DemazureKind::Lusztig {
        let f = c.zpow(&rho);
        for i in 0..c.rank() {
            r.push(Check::run(format!("T{} z^{rho:?} = -z^{rho:?}", i + 1), || {
                let want = -&f;
                match var.apply_poly(i, &f) {
                    Ok(got) if got == want => None,
                    got => Some(Failure {
                        location: format!("i = {}", i + 1),
                        lhs: got.map(|p| p.to_string()).unwrap_or_else(|e| e.to_string()),
                        rhs: want.to_string(),
                    }),
                }
            }));
        }
    }
    for mu in monomial_basis(&c, a.bound) {
        let f = c.zpow(&mu);
        for i in 0..c.rank() {
            r.push(Check::run(format!("quadratic T{} on z^{mu:?}", i + 1), || match quadratic_holds(&var, i, &f) {
                Ok(true) => None,
                Ok(false) => Some(Failure { location: format!("i = {}, mu = {mu:?}", i + 1), lhs: "(T-v)(T+1) f".into(), rhs: "0".into() }),
                Err(e) => Some(Failure { location: format!("mu = {mu:?}"), lhs: e.to_string(), rhs: "polynomial".into() }),
            }));
        }
        for i in 0..c.rank() {
            for j in i + 1..c.rank() {
                r.push(Check::run(format!("braid T{}T{} on z^{mu:?}", i + 1, j + 1), || match braid_holds(&var, i, j, &f) {
                    Ok(true) => None,
                    Ok(false) => Some(Failure { location: format!("({}, {}), mu = {mu:?}", i + 1, j + 1), lhs: "braid word".into(), rhs: "reversed braid word".into() }),
                    Err(e) => Some(Failure { location: format!("mu = {mu:?}"), lhs: e.to_string(), rhs: "polynomial".into() }),
                }));
            }
        }
    }
    out.report(r);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RCheck {
    Ybe,
    Pybe,
    Hecke,
    Triangularity,
    Schema,
}

pub struct RMatrixArgs {
    pub n: usize,
    pub check: RCheck,
    pub gauss: bool,
    pub twisted: bool,
    pub orientation: GaussOrientation,
    pub r: usize,
}

/// Yang-Baxter, Hecke, triangularity and tensor-schema checks for the `gl(n)` R-matrices.
pub fn run_rmatrix(a: &RMatrixArgs) -> Result<Output> {
    if !(1..=MAX_N).contains(&a.n) {
        return Err(Error::Unsupported(format!("n = {} (supported: 1..={MAX_N})", a.n)));
    }
    if a.gauss && a.twisted {
        return Err(Error::Invalid("--gauss and --twisted are exclusive".into()));
    }
    let rules = GaussRules::new(a.n as u32);
    let spec = if a.gauss {
        RMatrixSpec::gauss(a.n, rules.clone(), a.orientation)
    } else if a.twisted {
        RMatrixSpec::symbolic(a.n)
    } else {
        RMatrixSpec::untwisted(a.n)
    };
    let label = if a.gauss { "gauss" } else if a.twisted { "twisted" } else { "untwisted" };
    let name = format!("{label} n={}", a.n);
    let mut out = Output::new("rmatrix");
    let mut rep = Report::new(format!("R-matrix {name}"));
    match a.check {
        RCheck::Ybe => rep.push(check_ybe(&name, &r_gl(&spec), &spec.ctx)),
        RCheck::Pybe => {
            rep.push(check_pybe(&name, |x| r_affine(&spec, x), &spec.ctx));
            if a.gauss {
                let ctx = Ctx::with_gauss(rules.clone());
                rep.push(check_pybe(&format!("normalized n={}", a.n), |x| r_tilde(a.n, x, &rules, a.orientation), &ctx));
            }
        }
        RCheck::Hecke => rep.extend(check_hecke(&name, &spec)),
        RCheck::Triangularity => {
            if a.gauss {
                let ctx = Ctx::with_gauss(rules.clone());
                out.detail("scalar", RationalFunction::one());
                rep.push(check_triangularity(&format!("normalized n={}", a.n), |x| r_tilde(a.n, x, &rules, a.orientation), |_| RationalFunction::one(), &ctx));
            } else {
                out.detail("scalar", doubler_scalar(&RationalFunction::var(x_symbol())));
                rep.push(check_triangularity(&name, |x| r_affine(&spec, x), doubler_scalar, &spec.ctx));
            }
        }
        RCheck::Schema => {
            if !(2..=MAX_R).contains(&a.r) {
                return Err(Error::Unsupported(format!("r = {} (supported: 2..={MAX_R})", a.r)));
            }
            let twist = if a.gauss { Twist::Gauss } else { Twist::None };
            let inst = tensor_schema_instance(a.n, a.r, TensorSchemaOptions { twist, orientation: a.orientation, ..Default::default() })?;
            rep = inst.verify(&tensor_bernstein_weights(&inst));
            rep.push(check_content(&inst, a.n, a.r));
        }
    }
    out.report(rep);
    Ok(out)
}

pub struct MetaplecticArgs {
    pub r: usize,
    pub n: u32,
    pub weight: Weight,
    pub form: String,
    pub orientation: GaussOrientation,
    pub inject_mismatch: bool,
}

/// Whittaker values of the cover, one row per coset representative.
pub fn run_metaplectic(a: &MetaplecticArgs) -> Result<Output> {
    if !(2..=5).contains(&a.r) {
        return Err(Error::Unsupported(format!("GL{} (supported: GL2..GL5)", a.r)));
    }
    let c = Arc::new(CartanDatum::gl(a.r));
    check_dim(&c, &a.weight)?;
    let mut d = MetaplecticDatum::new(c.clone(), a.n, parse_form(&a.form, c.dim)?)?.with_orientation(a.orientation);
    if a.inject_mismatch {
        // The column holding the base vector, so the change is on the orbit.
        let col = d.class_of(&neg(&a.weight))?;
        for kind in [TauKind::One, TauKind::Two] {
            d = d.with_tau_factor(0, col, kind, RationalFunction::int(2));
        }
    }
    let wv = d.whittaker_value(&a.weight)?;
    let mut out = Output::new("metaplectic");
    for (rep, value) in d.reps.iter().zip(&wv.components) {
        out.detail(format!("nu = {rep:?}"), value);
    }
    out.detail("aggregate", &wv.aggregate);
    let mut r = Report::new(format!("GL{} n={} lambda={:?}", a.r, a.n, a.weight));
    r.push(Check::from_bool("aggregate equals the metaplectic Demazure sum", wv.agrees(&d.ctx), || Failure {
        location: format!("lambda = {:?}", a.weight),
        lhs: wv.aggregate.to_string(),
        rhs: wv.demazure_sum.to_string(),
    }));
    let inst = d.schema_instance()?;
    let ts: Vec<Matrix> = (0..c.rank()).map(|i| inst.build_t(i)).collect::<Result<_>>()?;
    r.push(d.check_met_dz(&ts, &a.weight));
    if a.n == 1 {
        let minus: Mat = (0..a.r).map(|i| (0..a.r).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        let cs = RationalFunction::from_poly(cs_rhs(&c, &a.weight)?.substitute(&c.z(), &minus));
        out.detail("Casselman-Shalika value at 1/z", &cs);
        r.push(Check::from_bool("aggregate equals the Casselman-Shalika value at 1/z", wv.aggregate == cs, || Failure {
            location: format!("lambda = {:?}", a.weight),
            lhs: wv.aggregate.to_string(),
            rhs: cs.to_string(),
        }));
    }
    out.report(r);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Jimbo,
    Trivial,
}

/// The wreath module `W·U` over `S_r`, and the zero limit of the tensor schema for Jimbo modules.
pub fn run_wreath(r: usize, n: usize, module: ModuleKind) -> Result<Output> {
    if !(2..=MAX_R).contains(&r) || !(1..=MAX_N).contains(&n) {
        return Err(Error::Unsupported(format!("r = {r}, n = {n} (supported: r in 2..={MAX_R}, n in 1..={MAX_N})")));
    }
    let c = Arc::new(CartanDatum::gl(r));
    let mut out = Output::new("wreath");
    match module {
        ModuleKind::Jimbo => {
            let w = WreathModule::new(c, jimbo_action(&RMatrixSpec::untwisted(n), r), Ctx::plain())?;
            out.detail("dimension", w.dim());
            out.report(w.verify(&format!("Jimbo n={n} r={r}")));
            out.report(limit_wreath_report(n, r)?);
        }
        ModuleKind::Trivial => {
            let v = RationalFunction::from_poly(hecke::algebra::v_poly());
            let ops = vec![Matrix::scalar(1, &v); c.rank()];
            let w = WreathModule::new(c, ops, Ctx::plain())?;
            out.detail("dimension", w.dim());
            out.report(w.verify(&format!("trivial r={r}")));
        }
    }
    Ok(out)
}
