//! Dense linear algebra over `F_p`.
//!
//! Every kernel, image and quotient computation in the crate goes through
//! this module: modules over the algebra are finite dimensional over `k`,
//! so all the homological claims reduce to ranks and subspaces here.

use std::fmt;

use crate::field::PrimeField;

/// `y += a * x`
#[inline]
pub fn axpy(field: PrimeField, y: &mut [u32], a: u32, x: &[u32]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = field.mul_add(*yi, a, xi);
        }
    }
}

#[inline]
pub fn scale(field: PrimeField, x: &mut [u32], a: u32) {
    for xi in x.iter_mut() {
        *xi = field.mul(*xi, a);
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FpMatrix {}x{} over {}",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let (orow, out_row) = (
                    other.row(l).to_vec(),
                    &mut out.data[i * other.cols..(i + 1) * other.cols],
                );
                axpy(f, out_row, a, &orow);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            scale(f, &mut self.data[r * self.cols..(r + 1) * self.cols], inv);
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i != r {
                    let a = self.get(i, c);
                    if a != 0 {
                        let neg = f.neg(a);
                        axpy(
                            f,
                            &mut self.data[i * self.cols..(i + 1) * self.cols],
                            neg,
                            &pivot_row,
                        );
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{ v : A v = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(i));
            aug.set(i, self.cols, bi);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// A subspace of `F_p^n` held as a fully reduced echelon basis.
///
/// The pivot of a vector is its first nonzero coordinate in `order`; with a
/// fixed order the reduced basis is unique, and reducing a vector modulo the
/// subspace yields a canonical coset representative.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    order: Vec<usize>,
    rank_of: Vec<usize>,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self::zero_with_order(field, ambient, (0..ambient).collect())
    }

    /// `order[i]` is the coordinate with the `i`-th highest pivot priority.
    pub fn zero_with_order(field: PrimeField, ambient: usize, order: Vec<usize>) -> Self {
        assert_eq!(order.len(), ambient);
        let mut rank_of = vec![0; ambient];
        for (i, &c) in order.iter().enumerate() {
            rank_of[c] = i;
        }
        Subspace {
            field,
            ambient,
            order,
            rank_of,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<I>(field: PrimeField, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut s = Self::zero(field, ambient);
        s.extend(vectors);
        s
    }

    pub fn spanned_by_with_order<I>(
        field: PrimeField,
        ambient: usize,
        order: Vec<usize>,
        vectors: I,
    ) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut s = Self::zero_with_order(field, ambient, order);
        s.extend(vectors);
        s
    }

    /// Same subspace, re-echelonized under another coordinate order.
    pub fn reordered(&self, order: Vec<usize>) -> Self {
        Self::spanned_by_with_order(self.field, self.ambient, order, self.rows.iter().cloned())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    fn pivot_of(&self, v: &[u32]) -> Option<usize> {
        self.order.iter().copied().find(|&c| v[c] != 0)
    }

    pub fn reduce_in_place(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.ambient);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let a = v[p];
            if a != 0 {
                axpy(self.field, v, self.field.neg(a), row);
            }
        }
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        let mut v = v;
        self.reduce_in_place(&mut v);
        let Some(p) = self.pivot_of(&v) else {
            return false;
        };
        let inv = self.field.inv(v[p]).expect("nonzero pivot");
        scale(self.field, &mut v, inv);
        for row in &mut self.rows {
            let a = row[p];
            if a != 0 {
                axpy(self.field, row, self.field.neg(a), &v);
            }
        }
        let pos = self
            .pivots
            .iter()
            .position(|&q| self.rank_of[q] > self.rank_of[p])
            .unwrap_or(self.pivots.len());
        self.rows.insert(pos, v);
        self.pivots.insert(pos, p);
        true
    }

    pub fn extend<I: IntoIterator<Item = Vec<u32>>>(&mut self, vectors: I) {
        for v in vectors {
            self.insert(v);
        }
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        s.extend(other.rows.iter().cloned());
        s
    }

    /// Canonical representatives of a basis of `self / sub` (requires
    /// `sub ⊆ self`): each is reduced modulo `sub`, and together they are in
    /// reduced echelon form under this subspace's order.
    pub fn quotient_basis(&self, sub: &Subspace) -> Vec<Vec<u32>> {
        let sub = if sub.order == self.order {
            sub.clone()
        } else {
            sub.reordered(self.order.clone())
        };
        let mut q = Subspace::zero_with_order(self.field, self.ambient, self.order.clone());
        for v in &self.rows {
            q.insert(sub.reduce(v));
        }
        q.rows
    }
}
