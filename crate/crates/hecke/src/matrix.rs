//! Sparse matrices over rational functions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::algebra::{Ctx, LaurentPoly, RationalFunction};
use crate::report::Failure;

/// A sparse matrix with rational-function entries; absent entries are zero.
#[derive(Clone, Debug, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, RationalFunction>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &RationalFunction::one())
    }

    pub fn scalar(n: usize, c: &RationalFunction) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.data[i].insert(i, c.clone());
            }
        }
        m
    }

    pub fn diagonal(entries: Vec<RationalFunction>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<RationalFunction>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, e) in row.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> RationalFunction {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&RationalFunction> {
        self.data[i].get(&j)
    }

    pub fn set(&mut self, i: usize, j: usize, e: RationalFunction) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if e.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, e);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, RationalFunction> {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for (i, row) in block.data.iter().enumerate() {
            for (&j, e) in row {
                self.set(r0 + i, c0 + j, e.clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for (&j, e) in self.data[r0 + i].range(c0..c0 + cols) {
                out.data[i].insert(j - c0, e.clone());
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction + Sync) -> Matrix {
        let data = self
            .data
            .par_iter()
            .map(|row| row.iter().map(|(&j, e)| (j, f(e))).filter(|(_, e)| !e.is_zero()).collect())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &RationalFunction, ctx: &Ctx) -> Matrix {
        self.map(|e| ctx.mul(e, c))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, e) in row {
                out.data[j].insert(i, e.clone());
            }
        }
        out
    }

    fn combine(&self, other: &Matrix, ctx: &Ctx, subtract: bool) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self
            .data
            .par_iter()
            .zip(other.data.par_iter())
            .map(|(a, b)| {
                let mut row = a.clone();
                for (&j, e) in b {
                    let v = match row.get(&j) {
                        Some(x) if subtract => ctx.sub(x, e),
                        Some(x) => ctx.add(x, e),
                        None if subtract => -e,
                        None => e.clone(),
                    };
                    if v.is_zero() {
                        row.remove(&j);
                    } else {
                        row.insert(j, v);
                    }
                }
                row
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix, ctx: &Ctx) -> Matrix {
        self.combine(other, ctx, false)
    }

    pub fn sub(&self, other: &Matrix, ctx: &Ctx) -> Matrix {
        self.combine(other, ctx, true)
    }

    pub fn mul(&self, other: &Matrix, ctx: &Ctx) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let data = self
            .data
            .par_iter()
            .map(|a| {
                let mut acc: BTreeMap<usize, Vec<RationalFunction>> = BTreeMap::new();
                for (&t, x) in a {
                    for (&j, y) in &other.data[t] {
                        acc.entry(j).or_default().push(x * y);
                    }
                }
                acc.into_iter()
                    .filter_map(|(j, parts)| {
                        let s = sum_balanced(parts);
                        let s = ctx.normalize(s);
                        (!s.is_zero()).then_some((j, s))
                    })
                    .collect()
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[RationalFunction], ctx: &Ctx) -> Vec<RationalFunction> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        self.data
            .par_iter()
            .map(|row| {
                let parts: Vec<RationalFunction> =
                    row.iter().filter(|(&j, _)| !v[j].is_zero()).map(|(&j, e)| e * &v[j]).collect();
                ctx.normalize(sum_balanced(parts))
            })
            .collect()
    }

    /// Entrywise exact comparison. Returns the first mismatching entry in
    /// row-major order, rendered through `label`.
    pub fn compare(&self, other: &Matrix, ctx: &Ctx, label: impl Fn(usize, usize) -> String + Sync) -> Option<Failure> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let bad: Vec<Option<(usize, usize)>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let a = &self.data[i];
                let b = &other.data[i];
                let mut cols: Vec<usize> = a.keys().chain(b.keys()).copied().collect();
                cols.sort_unstable();
                cols.dedup();
                cols.into_iter()
                    .find(|&j| {
                        let x = a.get(&j).cloned().unwrap_or_default();
                        let y = b.get(&j).cloned().unwrap_or_default();
                        !ctx.rf_equal(&x, &y)
                    })
                    .map(|j| (i, j))
            })
            .collect();
        bad.into_iter().flatten().next().map(|(i, j)| Failure {
            location: label(i, j),
            lhs: ctx.normalize(self.get(i, j)).to_string(),
            rhs: ctx.normalize(other.get(i, j)).to_string(),
        })
    }

    pub fn equals(&self, other: &Matrix, ctx: &Ctx) -> bool {
        self.compare(other, ctx, |_, _| String::new()).is_none()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix, ctx: &Ctx) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, a) in row {
                for (k, orow) in other.data.iter().enumerate() {
                    for (&l, b) in orow {
                        out.set(i * other.rows + k, j * other.cols + l, ctx.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination (for small matrices).
    pub fn inverse(&self, ctx: &Ctx) -> crate::Result<Matrix> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut a: Vec<Vec<RationalFunction>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        let mut inv: Vec<Vec<RationalFunction>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { RationalFunction::one() } else { RationalFunction::zero() }).collect()).collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(crate::Error::DivisionByZero)?;
            a.swap(col, p);
            inv.swap(col, p);
            let piv_inv = ctx.normalize(a[col][col].inv()?);
            for j in 0..n {
                a[col][j] = ctx.mul(&a[col][j], &piv_inv);
                inv[col][j] = ctx.mul(&inv[col][j], &piv_inv);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    if !a[col][j].is_zero() {
                        a[r][j] = ctx.sub(&a[r][j], &ctx.mul(&f, &a[col][j]));
                    }
                    if !inv[col][j].is_zero() {
                        inv[r][j] = ctx.sub(&inv[r][j], &ctx.mul(&f, &inv[col][j]));
                    }
                }
            }
        }
        Ok(Matrix::from_dense(inv))
    }

    /// True if every entry is a Laurent polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.data.iter().all(|r| r.values().all(|e| e.as_poly().is_some()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &RationalFunction)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(&j, e)| (i, j, e)))
    }
}

/// Sums rational functions, first adding numerators over equal factor
/// lists and then combining the groups pairwise.
pub fn sum_balanced(parts: Vec<RationalFunction>) -> RationalFunction {
    if parts.len() <= 1 {
        return parts.into_iter().next().unwrap_or_default();
    }
    let mut groups: Vec<(Vec<(LaurentPoly, u32)>, Vec<(crate::algebra::Monomial, crate::algebra::Coef)>)> = Vec::new();
    let mut index: HashMap<Vec<(LaurentPoly, u32)>, usize> = HashMap::new();
    for p in &parts {
        if p.is_zero() {
            continue;
        }
        let key = p.denominator_factors().to_vec();
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.extend(p.numerator().terms().iter().cloned());
    }
    let mut rest: Vec<RationalFunction> = groups
        .into_iter()
        .map(|(den, terms)| {
            RationalFunction::from_parts(LaurentPoly::from_terms(terms), den).expect("factors are nonzero")
        })
        .collect();
    if rest.is_empty() {
        return RationalFunction::zero();
    }
    while rest.len() > 1 {
        let mut next = Vec::with_capacity(rest.len().div_ceil(2));
        let mut it = rest.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(&a + &b),
                None => next.push(a),
            }
        }
        rest = next;
    }
    rest.pop().expect("nonempty")
}
