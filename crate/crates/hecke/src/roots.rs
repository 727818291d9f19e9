//! Finite root data realized in a lattice `Λ = ℤ^d`, Weyl groups as lattice
//! automorphisms, Bruhat order and Weyl characters.
//!
//! Roots here are the coroots `α_i∨ ∈ Λ`: they appear as exponents of the
//! torus coordinates, `z^{α_i∨}`. The functionals `⟨α_i, ·⟩` are stored
//! separately, and the simple reflections are `s_i λ = λ − ⟨α_i, λ⟩ α_i∨`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::{z_symbols, LaurentPoly, RationalFunction, Symbol};
use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i64>>;
pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CartanType {
    /// `A_r` realized as `GL_{r+1}`, i.e. in `ℤ^{r+1}`.
    A(usize),
    B2,
    C2,
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(r) => write!(f, "A{r}"),
            CartanType::B2 => f.write_str("B2"),
            CartanType::C2 => f.write_str("C2"),
            CartanType::G2 => f.write_str("G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        match t.as_str() {
            "B2" => Ok(CartanType::B2),
            "C2" => Ok(CartanType::C2),
            "G2" => Ok(CartanType::G2),
            _ => {
                if let Some(r) = t.strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
                    if (1..=4).contains(&r) {
                        return Ok(CartanType::A(r));
                    }
                }
                if let Some(r) = t.strip_prefix("GL").and_then(|r| r.parse::<usize>().ok()) {
                    if (2..=5).contains(&r) {
                        return Ok(CartanType::A(r - 1));
                    }
                }
                Err(Error::Unsupported(format!("Cartan type `{s}`")))
            }
        }
    }
}

/// A finite root datum together with its Weyl group.
#[derive(Clone, Debug)]
pub struct CartanDatum {
    pub cartan_type: CartanType,
    /// Lattice rank `d`.
    pub dim: usize,
    /// Simple coroots `α_i∨ ∈ ℤ^d`.
    pub simple: Vec<Weight>,
    /// Functionals `⟨α_i, ·⟩`, as coefficient vectors for the dot product.
    pub pairing: Vec<Weight>,
    /// Positive coroots.
    pub positive: Vec<Weight>,
    /// A lattice vector with `⟨α_i, ρ⟩ = 1` for every `i`.
    pub rho: Weight,
    /// Fundamental weights (only where they lie in the lattice).
    pub fundamental: Vec<Weight>,
    /// A basis of `Λ`.
    pub lattice_basis: Vec<Weight>,
    /// Orders `n(i, j)` of `s_i s_j`.
    pub orders: Vec<Vec<u32>>,
    pub weyl: WeylGroup,
}

/// An element of the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on column vectors of `Λ`.
    pub matrix: Mat,
    /// Canonical reduced word (0-based simple indices).
    pub word: Vec<usize>,
    pub length: usize,
}

impl WeylElement {
    /// The reduced word with 1-based letters, e.g. `"121"`; the identity is `""`.
    pub fn word_string(&self) -> String {
        self.word.iter().map(|i| (i + 1).to_string()).collect()
    }
}

/// The Weyl group with multiplication tables by simple reflections.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    index: HashMap<Mat, usize>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// `below[w][y]` iff `y ≤ w` in Bruhat order.
    below: Vec<Vec<bool>>,
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &Mat, v: &[i64]) -> Weight {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

pub fn scale(k: i64, a: &[i64]) -> Weight {
    a.iter().map(|x| k * x).collect()
}

impl CartanDatum {
    pub fn new(t: CartanType) -> Result<Self> {
        let (dim, simple, pairing, rho, fundamental, lattice_basis): (usize, Vec<Weight>, Vec<Weight>, Weight, Vec<Weight>, Vec<Weight>) =
            match t {
                CartanType::A(r) => {
                    if !(1..=4).contains(&r) {
                        return Err(Error::Unsupported(format!("A{r}")));
                    }
                    return Ok(Self::gl(r + 1));
                }
                CartanType::C2 => (
                    2,
                    vec![vec![1, -1], vec![0, 2]],
                    vec![vec![1, -1], vec![0, 1]],
                    vec![2, 1],
                    vec![vec![1, 0], vec![1, 1]],
                    vec![vec![1, 0], vec![0, 1]],
                ),
                // Coordinates with respect to the fundamental coweights, so ρ is integral.
                CartanType::B2 => (
                    2,
                    vec![vec![2, -2], vec![-1, 2]],
                    vec![vec![1, 0], vec![0, 1]],
                    vec![1, 1],
                    vec![vec![1, 0], vec![0, 1]],
                    vec![vec![1, 0], vec![0, 1]],
                ),
                // The plane Σλ = 0 of ℤ³.
                CartanType::G2 => (
                    3,
                    vec![vec![0, 1, -1], vec![1, -2, 1]],
                    vec![vec![0, 1, -1], vec![0, -1, 0]],
                    vec![3, -1, -2],
                    vec![vec![1, 0, -1], vec![2, -1, -1]],
                    vec![vec![1, 0, -1], vec![2, -1, -1]],
                ),
            };
        Ok(Self::from_data(t, dim, simple, pairing, rho, fundamental, lattice_basis))
    }

    /// `GL_r`: type `A_{r-1}` in `ℤ^r` with `α_i∨ = e_i − e_{i+1}` and `ρ = (r−1, …, 0)`.
    pub fn gl(r: usize) -> Self {
        assert!(r >= 1, "GL_r needs r >= 1");
        let e = |i: usize| -> Weight { (0..r).map(|j| i64::from(i == j)).collect() };
        let simple: Vec<Weight> = (0..r - 1).map(|i| sub(&e(i), &e(i + 1))).collect();
        let rho: Weight = (0..r).map(|i| (r - 1 - i) as i64).collect();
        let fundamental: Vec<Weight> = (1..r).map(|k| (0..r).map(|j| i64::from(j < k)).collect()).collect();
        let basis: Vec<Weight> = (0..r).map(e).collect();
        Self::from_data(CartanType::A(r.saturating_sub(1)), r, simple.clone(), simple, rho, fundamental, basis)
    }

    fn from_data(
        cartan_type: CartanType,
        dim: usize,
        simple: Vec<Weight>,
        pairing: Vec<Weight>,
        rho: Weight,
        fundamental: Vec<Weight>,
        lattice_basis: Vec<Weight>,
    ) -> Self {
        let rank = simple.len();
        let reflections: Vec<Mat> = (0..rank)
            .map(|i| {
                (0..dim)
                    .map(|a| (0..dim).map(|b| i64::from(a == b) - simple[i][a] * pairing[i][b]).collect())
                    .collect()
            })
            .collect();
        // Φ∨₊ is the closure of the simple coroots under s_i applied to roots other than α_i∨.
        let mut positive: Vec<Weight> = simple.clone();
        let mut k = 0;
        while k < positive.len() {
            let beta = positive[k].clone();
            for i in 0..rank {
                if beta == simple[i] {
                    continue;
                }
                let img = mat_vec(&reflections[i], &beta);
                if !positive.contains(&img) {
                    positive.push(img);
                }
            }
            k += 1;
        }
        let weyl = WeylGroup::generate(dim, &reflections);
        let orders = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let p = mat_mul(&reflections[i], &reflections[j]);
                        let mut acc = p.clone();
                        let mut n = 1;
                        while acc != identity(dim) {
                            acc = mat_mul(&acc, &p);
                            n += 1;
                        }
                        n
                    })
                    .collect()
            })
            .collect();
        CartanDatum { cartan_type, dim, simple, pairing, positive, rho, fundamental, lattice_basis, orders, weyl }
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn order(&self) -> usize {
        self.weyl.elements.len()
    }

    pub fn z(&self) -> Vec<Symbol> {
        z_symbols(self.dim)
    }

    /// `⟨α_i, λ⟩`.
    pub fn pair(&self, i: usize, lambda: &[i64]) -> i64 {
        dot(&self.pairing[i], lambda)
    }

    pub fn reflect(&self, i: usize, lambda: &[i64]) -> Weight {
        let k = self.pair(i, lambda);
        sub(lambda, &scale(k, &self.simple[i]))
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        (0..self.rank()).all(|i| self.pair(i, lambda) >= 0)
    }

    /// `w λ`.
    pub fn act(&self, w: usize, lambda: &[i64]) -> Weight {
        mat_vec(&self.weyl.elements[w].matrix, lambda)
    }

    /// `f ↦ w·f` with `w·z^λ = z^{wλ}`.
    pub fn act_fn(&self, w: usize, f: &RationalFunction) -> RationalFunction {
        f.substitute(&self.z(), &self.weyl.elements[w].matrix)
    }

    pub fn act_poly(&self, w: usize, f: &LaurentPoly) -> LaurentPoly {
        f.substitute(&self.z(), &self.weyl.elements[w].matrix)
    }

    pub fn zpow(&self, lambda: &[i64]) -> LaurentPoly {
        LaurentPoly::z_pow(&self.z(), lambda)
    }

    /// `(w z)^λ = z^{w⁻¹ λ}`.
    pub fn eval_at_w(&self, w: usize, lambda: &[i64]) -> Weight {
        self.act(self.weyl.inverse(w), lambda)
    }

    /// The Weyl character `χ_λ` as the quotient of alternants
    /// `Σ_w (−1)^ℓ(w) z^{w(λ+ρ)} / Σ_w (−1)^ℓ(w) z^{wρ}`.
    pub fn weyl_character(&self, lambda: &[i64]) -> Result<LaurentPoly> {
        if !self.is_dominant(lambda) {
            return Err(Error::Invalid(format!("weight {lambda:?} is not dominant")));
        }
        let alt = |mu: &[i64]| -> LaurentPoly {
            LaurentPoly::from_terms(self.weyl.elements.iter().enumerate().map(|(w, el)| {
                let c = if el.length % 2 == 0 { 1 } else { -1 };
                (crate::algebra::Monomial::from_exponents(&self.z(), &self.act(w, mu)), crate::algebra::int(c))
            }))
        };
        let num = alt(&add(lambda, &self.rho));
        let den = alt(&self.rho);
        num.exact_divide(&den)
    }

    /// `∏_{β ∈ Φ∨₊} (1 − c·z^{εβ})` for a polynomial `c` and sign `ε`.
    pub fn positive_product(&self, c: &LaurentPoly, sign: i64) -> LaurentPoly {
        let one = LaurentPoly::one();
        self.positive.iter().fold(one.clone(), |acc, beta| &acc * &(&one - &(c * &self.zpow(&scale(sign, beta)))))
    }

    /// Dominant weights whose coordinates lie in `0..=bound`.
    pub fn dominant_in_box(&self, bound: i64) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.dim];
        loop {
            if self.is_dominant(&cur) && self.in_lattice(&cur) {
                out.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == self.dim {
                    return out;
                }
                if cur[k] < bound {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    /// Membership in `Λ` (only G2 uses a proper sublattice of `ℤ^d`).
    pub fn in_lattice(&self, lambda: &[i64]) -> bool {
        match self.cartan_type {
            CartanType::G2 => lambda.iter().sum::<i64>() == 0,
            _ => true,
        }
    }

    /// Every `w ∈ W` preserves `Φ∨`, and `s_i` permutes `Φ∨₊ ∖ {α_i∨}`.
    pub fn check_root_permutation(&self) -> bool {
        (0..self.rank()).all(|i| {
            let rest: Vec<&Weight> = self.positive.iter().filter(|b| **b != self.simple[i]).collect();
            self.reflect(i, &self.simple[i]) == neg(&self.simple[i])
                && rest.iter().all(|b| rest.contains(&&self.reflect(i, b)))
        })
    }
}

impl WeylGroup {
    fn generate(dim: usize, refl: &[Mat]) -> Self {
        let rank = refl.len();
        let mut mats: Vec<Mat> = vec![identity(dim)];
        let mut index: HashMap<Mat, usize> = HashMap::new();
        index.insert(identity(dim), 0);
        let mut length = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for r in refl {
                let m = mat_mul(&mats[w], r);
                if !index.contains_key(&m) {
                    index.insert(m.clone(), mats.len());
                    mats.push(m);
                    length.push(length[w] + 1);
                    queue.push_back(mats.len() - 1);
                }
            }
        }
        let n = mats.len();
        let right: Vec<Vec<usize>> = (0..rank).map(|i| (0..n).map(|w| index[&mat_mul(&mats[w], &refl[i])]).collect()).collect();
        let left: Vec<Vec<usize>> = (0..rank).map(|i| (0..n).map(|w| index[&mat_mul(&refl[i], &mats[w])]).collect()).collect();
        // Canonical words: strip the smallest right descent, recursively.
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| length[w]);
        for &w in &order[1..] {
            let i = (0..rank).find(|&i| length[right[i][w]] < length[w]).expect("nonidentity has a descent");
            let mut word = words[right[i][w]].clone().expect("shorter element processed");
            word.push(i);
            words[w] = Some(word);
        }
        let elements: Vec<WeylElement> = (0..n)
            .map(|w| WeylElement { matrix: mats[w].clone(), word: words[w].clone().expect("word"), length: length[w] })
            .collect();
        let inverse = (0..n)
            .map(|w| {
                let mut x = 0;
                for &i in elements[w].word.iter().rev() {
                    x = right[i][x];
                }
                x
            })
            .collect();
        let mut below = vec![vec![false; n]; n];
        below[0][0] = true;
        for &w in &order[1..] {
            let i = *elements[w].word.last().expect("nonempty");
            let prev = right[i][w];
            let mut set = below[prev].clone();
            for y in 0..n {
                if below[prev][y] {
                    set[right[i][y]] = true;
                }
            }
            below[w] = set;
        }
        WeylGroup { elements, index, left, right, inverse, below }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `s_i w`.
    pub fn left_mul(&self, i: usize, w: usize) -> usize {
        self.left[i][w]
    }

    /// `w s_i`.
    pub fn right_mul(&self, w: usize, i: usize) -> usize {
        self.right[i][w]
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&mat_mul(&self.elements[a].matrix, &self.elements[b].matrix)]
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn find(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The element with the given (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |w, &i| self.right[i][w])
    }

    pub fn by_word_string(&self, s: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.word_string() == s)
    }

    /// Bruhat order `y ≤ w` (subword criterion).
    pub fn bruhat_le(&self, y: usize, w: usize) -> bool {
        self.below[w][y]
    }

    pub fn longest(&self) -> usize {
        (0..self.len()).max_by_key(|&w| self.elements[w].length).expect("nonempty")
    }

    /// `Σ_w t^{ℓ(w)}` as coefficients by length.
    pub fn poincare(&self) -> Vec<u64> {
        let top = self.elements[self.longest()].length;
        let mut c = vec![0u64; top + 1];
        for e in &self.elements {
            c[e.length] += 1;
        }
        c
    }
}

/// Brute-force Weyl sum `Σ_w w( z^λ ∏_{β>0} (1 − z^{−β})^{-1} )`, kept as an
/// independent route to the character.
pub fn weyl_character_bruteforce(c: &CartanDatum, lambda: &[i64]) -> Result<LaurentPoly> {
    let one = LaurentPoly::one();
    let mut den = Vec::new();
    for beta in &c.positive {
        den.push((&one - &c.zpow(&neg(beta)), 1));
    }
    let base = RationalFunction::from_parts(c.zpow(lambda), den)?;
    let mut acc = RationalFunction::zero();
    for w in 0..c.order() {
        acc = &acc + &c.act_fn(w, &base);
    }
    if acc.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    acc.to_poly()
}

impl LaurentPoly {
    /// True if every coefficient is a nonnegative integer.
    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.terms().iter().all(|(_, c)| c.is_integer() && !(c < &crate::algebra::Coef::zero()))
    }
}
