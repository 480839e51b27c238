//! Presentation matrices and the module invariants computed from them.
//!
//! A [`PresentationMatrix`] `M` (`r × c`, entries in `R`) presents
//! `coker(Rᶜ → Rʳ)`. Elements of `Rʳ` are flattened row-block first:
//! coordinate `i * dim R + k` is the `k`-th basis coefficient of row `i`.

mod endo;
pub(crate) mod equiv;

pub use endo::{is_indecomposable, Indecomposability};
pub use equiv::{
    general_linear_group, gl_order, is_equivalent, EquivalenceWitness, NormalFormData,
    DEFAULT_BUDGET,
};

use std::fmt;

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresentationMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl PresentationMatrix {
    pub fn zeros(ring: &GradedLocalAlgebra, rows: usize, cols: usize) -> Self {
        PresentationMatrix {
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &GradedLocalAlgebra, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_entries(
        ring: &GradedLocalAlgebra,
        rows: usize,
        cols: usize,
        entries: Vec<RingElement>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.coeffs().len() != ring.dim()) {
            return Err(Error::ElementLength {
                expected: ring.dim(),
                got: e.coeffs().len(),
            });
        }
        Ok(PresentationMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows of expressions, e.g. `[["x","z"],["y","x"]]`.
    pub fn parse<S: AsRef<str>>(ring: &GradedLocalAlgebra, rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|s| ring.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(ring, rows.len(), cols, entries)
    }

    /// `1 × 1` matrix `[a]`.
    pub fn cyclic(a: RingElement) -> Self {
        PresentationMatrix {
            rows: 1,
            cols: 1,
            entries: vec![a],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<RingElement> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn to_strings(&self, ring: &GradedLocalAlgebra) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| ring.format(self.get(i, j)))
                    .collect()
            })
            .collect()
    }

    pub fn display<'a>(&'a self, ring: &'a GradedLocalAlgebra) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PresentationMatrix, &'a GradedLocalAlgebra);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let rows: Vec<String> = self
                    .0
                    .to_strings(self.1)
                    .into_iter()
                    .map(|r| format!("[{}]", r.join(", ")))
                    .collect();
                write!(f, "[{}]", rows.join(", "))
            }
        }
        D(self, ring)
    }

    /// Every entry lies in `𝔪`.
    pub fn is_minimal(&self) -> bool {
        self.entries.iter().all(|e| !e.is_unit())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PresentationMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, ring: &GradedLocalAlgebra, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let d = ring.dim();
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = vec![0u32; d];
                for l in 0..self.cols {
                    ring.mul_acc(&mut acc, self.get(i, l).coeffs(), other.get(l, j).coeffs());
                }
                out.set(i, j, RingElement::from_coeffs(acc));
            }
        }
        Ok(out)
    }

    /// Left multiplication by a scalar matrix.
    pub fn scalar_left(&self, ring: &GradedLocalAlgebra, p: &FpMatrix) -> Self {
        assert_eq!(p.cols(), self.rows);
        let mut out = Self::zeros(ring, p.rows(), self.cols);
        for i in 0..p.rows() {
            for j in 0..self.cols {
                let mut acc = ring.zero();
                for l in 0..self.rows {
                    let a = p.get(i, l);
                    if a != 0 {
                        acc = ring.add(&acc, &ring.scale(self.get(l, j), a));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Right multiplication by a scalar matrix.
    pub fn scalar_right(&self, ring: &GradedLocalAlgebra, q: &FpMatrix) -> Self {
        self.transpose()
            .scalar_left(ring, &q.transpose())
            .transpose()
    }

    pub fn delete_row_col(&self, row: usize, col: usize) -> Self {
        let mut entries = Vec::new();
        for i in (0..self.rows).filter(|&i| i != row) {
            for j in (0..self.cols).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        PresentationMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    pub fn delete_row(&self, row: usize) -> Self {
        let mut entries = Vec::with_capacity((self.rows - 1) * self.cols);
        for i in (0..self.rows).filter(|&i| i != row) {
            entries.extend_from_slice(&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        PresentationMatrix {
            rows: self.rows - 1,
            cols: self.cols,
            entries,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::new();
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        PresentationMatrix {
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    /// Leading principal `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let mut entries = Vec::new();
        for i in 0..k {
            for j in 0..k {
                entries.push(self.get(i, j).clone());
            }
        }
        PresentationMatrix {
            rows: k,
            cols: k,
            entries,
        }
    }

    /// `[[a, b], [c, d]]` from blocks; panics on inconsistent shapes.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = match (i < a.rows, j < a.cols) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - a.cols),
                    (false, true) => c.get(i - a.rows, j),
                    (false, false) => d.get(i - a.rows, j - a.cols),
                };
                entries.push(e.clone());
            }
        }
        PresentationMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn direct_sum(ring: &GradedLocalAlgebra, a: &Self, b: &Self) -> Self {
        Self::block(
            a,
            &Self::zeros(ring, a.rows, b.cols),
            &Self::zeros(ring, b.rows, a.cols),
            b,
        )
    }

    /// Column `j` as a flattened vector in `Rʳ`.
    pub fn column_vector(&self, j: usize) -> Vec<u32> {
        let mut v = Vec::new();
        for i in 0..self.rows {
            v.extend_from_slice(self.get(i, j).coeffs());
        }
        v
    }

    pub fn from_column_vectors(
        ring: &GradedLocalAlgebra,
        rows: usize,
        columns: &[Vec<u32>],
    ) -> Self {
        let d = ring.dim();
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows * d);
            for i in 0..rows {
                m.set(
                    i,
                    j,
                    RingElement::from_coeffs(v[i * d..(i + 1) * d].to_vec()),
                );
            }
        }
        m
    }

    /// The k-linear map `Rᶜ → Rʳ`, an `(r·dim R) × (c·dim R)` matrix.
    pub fn linearize(&self, ring: &GradedLocalAlgebra) -> FpMatrix {
        let d = ring.dim();
        let mut lin = FpMatrix::zeros(ring.field(), self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let m = ring.multiplication_matrix(e);
                for a in 0..d {
                    for b in 0..d {
                        lin.set(i * d + a, j * d + b, m.get(a, b));
                    }
                }
            }
        }
        lin
    }

    /// `im M ⊆ Rʳ` as a k-subspace.
    pub fn image(&self, ring: &GradedLocalAlgebra) -> Subspace {
        let lin = self.linearize(ring);
        Subspace::spanned_by(
            ring.field(),
            self.rows * ring.dim(),
            (0..lin.cols()).map(|c| lin.column(c)),
        )
    }

    /// Degree-1 coefficient matrices, one `r × c` scalar matrix per variable.
    pub fn linear_parts(&self, ring: &GradedLocalAlgebra) -> Vec<FpMatrix> {
        (0..ring.embedding_dim())
            .map(|v| {
                let mut m = FpMatrix::zeros(ring.field(), self.rows, self.cols);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        m.set(i, j, self.get(i, j).coeffs()[1 + v]);
                    }
                }
                m
            })
            .collect()
    }
}

/// `a · v` for `v ∈ Rⁿ` (flattened).
pub fn module_scale(ring: &GradedLocalAlgebra, a: &RingElement, v: &[u32]) -> Vec<u32> {
    let d = ring.dim();
    let mut out = vec![0u32; v.len()];
    for (block, chunk) in v.chunks(d).enumerate() {
        ring.mul_acc(&mut out[block * d..(block + 1) * d], a.coeffs(), chunk);
    }
    out
}

/// `𝔪 · U` for a submodule `U ⊆ Rⁿ`.
pub fn m_times_module(ring: &GradedLocalAlgebra, sub: &Subspace) -> Subspace {
    let mut out = Subspace::zero_with_order(ring.field(), sub.ambient(), sub.order().to_vec());
    for v in sub.basis() {
        for i in 0..ring.embedding_dim() {
            out.insert(module_scale(ring, &ring.var(i), v));
        }
    }
    out
}

/// The R-submodule generated by the given vectors.
pub fn submodule(ring: &GradedLocalAlgebra, ambient: usize, gens: &[Vec<u32>]) -> Subspace {
    let mut s = Subspace::zero(ring.field(), ambient);
    for g in gens {
        for k in 0..ring.dim() {
            s.insert(module_scale(ring, &ring.basis_element(k), g));
        }
    }
    s
}

/// k-length of `coker M`.
pub fn coker_length(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> usize {
    m.rows * ring.dim() - m.linearize(ring).rank()
}

/// Pivots away unit entries and drops redundant columns; the cokernel is
/// unchanged up to isomorphism and the result has entries in `𝔪` with
/// columns minimally generating its image.
pub fn minimize(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> PresentationMatrix {
    let mut m = m.clone();
    while let Some(pos) = m.entries.iter().position(RingElement::is_unit) {
        let (pi, pj) = (pos / m.cols, pos % m.cols);
        let inv = ring.inverse(m.get(pi, pj)).expect("unit entry");
        for l in (0..m.rows).filter(|&l| l != pi) {
            let factor = ring.mul(m.get(l, pj), &inv);
            if factor.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let v = ring.sub(m.get(l, j), &ring.mul(&factor, m.get(pi, j)));
                m.set(l, j, v);
            }
        }
        for k in (0..m.cols).filter(|&k| k != pj) {
            let factor = ring.mul(m.get(pi, k), &inv);
            if factor.is_zero() {
                continue;
            }
            for i in 0..m.rows {
                let v = ring.sub(m.get(i, k), &ring.mul(&factor, m.get(i, pj)));
                m.set(i, k, v);
            }
        }
        m = m.delete_row_col(pi, pj);
    }
    let image = m.image(ring);
    let mut span = m_times_module(ring, &image);
    let keep: Vec<usize> = (0..m.cols)
        .filter(|&j| span.insert(m.column_vector(j)))
        .collect();
    m.select_columns(&keep)
}

/// Minimal generators of a submodule of `Rⁿ` (`n` blocks), as matrix
/// columns. Generators are reduced modulo `𝔪U` and ordered by the last
/// block in which they are nonzero, so triangular kernels come out
/// upper triangular.
pub fn minimal_generators_ut(
    ring: &GradedLocalAlgebra,
    blocks: usize,
    vectors: Vec<Vec<u32>>,
) -> PresentationMatrix {
    let d = ring.dim();
    let order: Vec<usize> = (0..blocks)
        .rev()
        .flat_map(|b| (0..d).map(move |k| b * d + k))
        .collect();
    let space = Subspace::spanned_by_with_order(ring.field(), blocks * d, order, vectors);
    let m_space = m_times_module(ring, &space);
    let mut gens = space.quotient_basis(&m_space);
    gens.reverse();
    PresentationMatrix::from_column_vectors(ring, blocks, &gens)
}

/// Minimal presentation of the first syzygy: the columns minimally
/// generate `ker(M) ⊆ Rᶜ`, so `M·W = 0` and `im W = ker M`.
pub fn syzygy(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> PresentationMatrix {
    let kernel = m.linearize(ring).kernel();
    minimal_generators_ut(ring, m.cols, kernel)
}

/// `Hom(-, R)` applied to the map: the transpose.
pub fn dual(m: &PresentationMatrix) -> PresentationMatrix {
    m.transpose()
}

/// Scalar coefficients `λ` (not all zero) such that `Σ λ_j c_j` has every
/// entry in `𝔪²`, i.e. after a column operation some column lies in `𝔪²`.
pub fn m2_column_combination(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
) -> Option<Vec<u32>> {
    let e = ring.embedding_dim();
    let columns: Vec<Vec<u32>> = (0..m.cols)
        .map(|j| {
            (0..m.rows)
                .flat_map(|i| ring.linear_part(m.get(i, j)))
                .collect()
        })
        .collect();
    if columns.is_empty() {
        return None;
    }
    let mat = FpMatrix::from_columns(ring.field(), m.rows * e, &columns);
    mat.kernel().into_iter().next()
}

pub fn has_m2_column(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> bool {
    m2_column_combination(ring, m).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32) -> GradedLocalAlgebra {
        GradedLocalAlgebra::s_ring(p).unwrap()
    }

    fn mat(ring: &GradedLocalAlgebra, rows: &[&[&str]]) -> PresentationMatrix {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        PresentationMatrix::parse(ring, &rows).unwrap()
    }

    #[test]
    fn lengths() {
        let r = s(2);
        assert_eq!(coker_length(&r, &mat(&r, &[&["x"]])), 3);
        assert_eq!(coker_length(&r, &mat(&r, &[&["x", "y"], &["0", "x+y"]])), 6);
        assert_eq!(coker_length(&r, &mat(&r, &[&["1"]])), 0);
    }

    #[test]
    fn minimize_cases() {
        let r = s(3);
        let m = mat(&r, &[&["x-y", "1"], &["0", "x+y"]]);
        let min = minimize(&r, &m);
        assert_eq!(min.shape(), (1, 0));
        assert_eq!(coker_length(&r, &min), 6);
        let one = minimize(&r, &mat(&r, &[&["1"]]));
        assert_eq!(one.shape(), (0, 0));
        let already = mat(&r, &[&["x", "z"], &["y", "x"]]);
        assert_eq!(minimize(&r, &already), already);
        let redundant = mat(&r, &[&["x", "x"]]);
        assert_eq!(minimize(&r, &redundant), mat(&r, &[&["x"]]));
    }

    #[test]
    fn syzygies() {
        let r = s(2);
        assert_eq!(syzygy(&r, &mat(&r, &[&["x"]])), mat(&r, &[&["x"]]));
        let r3 = s(3);
        assert_eq!(syzygy(&r3, &mat(&r3, &[&["x+y"]])), mat(&r3, &[&["x-y"]]));
        let ut = mat(&r, &[&["x", "y"], &["0", "x"]]);
        let w = syzygy(&r, &ut);
        assert!(w.is_upper_triangular());
        assert!(ut.mul(&r, &w).unwrap().is_zero());
    }

    #[test]
    fn m2_column_syzygy_has_k_summand() {
        let r = s(2);
        let m = mat(&r, &[&["x*y"], &["x*z"]]);
        assert!(has_m2_column(&r, &m));
        let w = syzygy(&r, &m);
        // a k-summand shows up as a row carrying all of x, y, z: the
        // syzygy has 3 + (rest) columns, more than the single column of M.
        assert!(w.cols() > m.rows());
        assert!(!has_m2_column(&r, &mat(&r, &[&["x", "z"], &["y", "x"]])));
        assert!(has_m2_column(
            &r,
            &mat(&r, &[&["x", "x+x*y"], &["0", "x*z"]])
        ));
    }

    #[test]
    fn transpose_shapes() {
        let r = s(2);
        let m = mat(&r, &[&["x", "z"], &["y", "x"]]);
        assert_eq!(dual(&m), mat(&r, &[&["x", "y"], &["z", "x"]]));
        let rect = mat(&r, &[&["x", "y", "z"], &["0", "x", "y"]]);
        assert_eq!(dual(&rect).shape(), (3, 2));
    }
}
