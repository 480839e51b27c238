//! Equivalence of minimal presentation matrices.
//!
//! Split `M = L + Q` into degree-1 and degree-2 parts. Any invertible pair
//! can be written `P = P₀(I + A)`, `Q = (I + B)Q₀` with `P₀, Q₀` scalar and
//! `A, B` with entries in `𝔪`; since `𝔪³ = 0` only the degree-1 parts of
//! `A, B` act, and
//!
//! ```text
//! P M Q = P₀ (L + Q_M + A L + L B) Q₀.
//! ```
//!
//! So `M₁ ~ M₂` iff there are scalar `P₀, Q₀` with `P₀ L₁ Q₀ = L₂` and
//! `P₀⁻¹ Q_{M₂} Q₀⁻¹ − Q_{M₁}` in the correction space `{A L₁ + L₁ B}`.
//! For fixed `P₀` the first condition is linear in `Q₀`, so the search
//! enumerates `GL_r(k)` and solves for `Q₀`.

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{FpMatrix, Subspace};

use super::PresentationMatrix;

/// Default number of scalar candidates a search may examine.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub p: PresentationMatrix,
    pub q: PresentationMatrix,
}

impl EquivalenceWitness {
    pub fn identity(ring: &GradedLocalAlgebra, rows: usize, cols: usize) -> Self {
        EquivalenceWitness {
            p: PresentationMatrix::identity(ring, rows),
            q: PresentationMatrix::identity(ring, cols),
        }
    }

    /// `P·M₁·Q = M₂` exactly, with `P`, `Q` invertible.
    pub fn verify(
        &self,
        ring: &GradedLocalAlgebra,
        m1: &PresentationMatrix,
        m2: &PresentationMatrix,
    ) -> bool {
        let scalar_invertible = |m: &PresentationMatrix| {
            let mut s = FpMatrix::zeros(ring.field(), m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    s.set(i, j, m.get(i, j).scalar());
                }
            }
            s.is_invertible()
        };
        if !scalar_invertible(&self.p) || !scalar_invertible(&self.q) {
            return false;
        }
        match self.p.mul(ring, m1).and_then(|pm| pm.mul(ring, &self.q)) {
            Ok(prod) => &prod == m2,
            Err(_) => false,
        }
    }
}

pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub(crate) fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                needed: self.used,
                budget: self.limit,
            });
        }
        Ok(())
    }
}

/// `|GL_n(F_p)|`, saturating.
pub fn gl_order(p: u32, n: usize) -> u64 {
    let p = p as u128;
    let pn = p.pow(n as u32);
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc.saturating_mul(pn - p.pow(i as u32));
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All invertible `n × n` matrices over `F_p`, built row by row.
pub fn general_linear_group(field: PrimeField, n: usize) -> Vec<FpMatrix> {
    let p = field.characteristic();
    let vectors: Vec<Vec<u32>> = (0..(p as u64).pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % p as u64) as u32;
                    idx /= p as u64;
                    d
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    fn rec(
        field: PrimeField,
        n: usize,
        vectors: &[Vec<u32>],
        rows: &mut Vec<Vec<u32>>,
        span: &Subspace,
        out: &mut Vec<FpMatrix>,
    ) {
        if rows.len() == n {
            out.push(FpMatrix::from_rows(field, n, rows));
            return;
        }
        for v in vectors {
            if span.contains(v) {
                continue;
            }
            let mut next = span.clone();
            next.insert(v.clone());
            rows.push(v.clone());
            rec(field, n, vectors, rows, &next, out);
            rows.pop();
        }
    }
    rec(
        field,
        n,
        &vectors,
        &mut rows,
        &Subspace::zero(field, n),
        &mut out,
    );
    out
}

/// Every `Σ cᵢ vᵢ + base` for `c ∈ F_pᵏ`.
pub(crate) fn affine_points(field: PrimeField, base: &[u32], dirs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let p = field.characteristic();
    let total = (p as u64).pow(dirs.len() as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u32; dirs.len()];
    for _ in 0..total {
        let mut v = base.to_vec();
        for (c, d) in digits.iter().zip(dirs) {
            crate::linalg::axpy(field, &mut v, *c, d);
        }
        out.push(v);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// Quadratic part of an `r × c` matrix, flattened as `(i*c + j)*s₂ + q`.
pub(crate) fn quad_vector(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Vec<u32> {
    m.entries()
        .iter()
        .flat_map(|e| ring.quadratic_part(e))
        .collect()
}

/// `P·X·Q` for a flattened quadratic matrix `X` (`r × c`).
pub(crate) fn quad_transform(
    field: PrimeField,
    s2: usize,
    x: &[u32],
    (r, c): (usize, usize),
    p: &FpMatrix,
    q: &FpMatrix,
) -> Vec<u32> {
    let (r2, c2) = (p.rows(), q.cols());
    let mut out = vec![0u32; r2 * c2 * s2];
    // tmp = X·Q
    let mut tmp = vec![0u32; r * c2 * s2];
    for i in 0..r {
        for j in 0..c {
            for b in 0..c2 {
                let qv = q.get(j, b);
                if qv == 0 {
                    continue;
                }
                for t in 0..s2 {
                    let src = x[(i * c + j) * s2 + t];
                    if src != 0 {
                        let dst = &mut tmp[(i * c2 + b) * s2 + t];
                        *dst = field.mul_add(*dst, qv, src);
                    }
                }
            }
        }
    }
    for a in 0..r2 {
        for i in 0..r {
            let pv = p.get(a, i);
            if pv == 0 {
                continue;
            }
            for b in 0..c2 {
                for t in 0..s2 {
                    let src = tmp[(i * c2 + b) * s2 + t];
                    if src != 0 {
                        let dst = &mut out[(a * c2 + b) * s2 + t];
                        *dst = field.mul_add(*dst, pv, src);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Correction {
    /// `x_v E_{il}` on the left.
    Left { i: usize, l: usize, v: usize },
    /// `x_v E_{lj}` on the right.
    Right { l: usize, j: usize, v: usize },
}

/// Degree decomposition of a minimal matrix plus its correction space.
#[derive(Clone, Debug)]
pub struct NormalFormData {
    pub rows: usize,
    pub cols: usize,
    pub linear: Vec<FpMatrix>,
    pub quad: Vec<u32>,
    generators: Vec<(Correction, Vec<u32>)>,
    /// Span of `{A·L + L·B}` inside the flattened quadratic matrices.
    pub corrections: Subspace,
}

impl NormalFormData {
    pub fn new(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Self {
        let (r, c) = m.shape();
        let s2 = ring.m2_dim();
        let e = ring.embedding_dim();
        let lin_elem = |x: &RingElement| {
            let mut v = vec![0u32; ring.dim()];
            v[1..=e].copy_from_slice(&x.coeffs()[1..=e]);
            RingElement::from_coeffs(v)
        };
        let mut generators = Vec::new();
        for v in 0..e {
            let xv = ring.var(v);
            for i in 0..r {
                for l in 0..r {
                    let mut z = vec![0u32; r * c * s2];
                    for j in 0..c {
                        let prod = ring.mul(&xv, &lin_elem(m.get(l, j)));
                        z[(i * c + j) * s2..(i * c + j + 1) * s2]
                            .copy_from_slice(&ring.quadratic_part(&prod));
                    }
                    generators.push((Correction::Left { i, l, v }, z));
                }
            }
            for l in 0..c {
                for j in 0..c {
                    let mut z = vec![0u32; r * c * s2];
                    for i in 0..r {
                        let prod = ring.mul(&lin_elem(m.get(i, l)), &xv);
                        z[(i * c + j) * s2..(i * c + j + 1) * s2]
                            .copy_from_slice(&ring.quadratic_part(&prod));
                    }
                    generators.push((Correction::Right { l, j, v }, z));
                }
            }
        }
        let corrections = Subspace::spanned_by(
            ring.field(),
            r * c * s2,
            generators.iter().map(|(_, z)| z.clone()),
        );
        NormalFormData {
            rows: r,
            cols: c,
            linear: m.linear_parts(ring),
            quad: quad_vector(ring, m),
            generators,
            corrections,
        }
    }

    pub(crate) fn generator_vectors(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(|(_, z)| z.clone()).collect()
    }

    /// Solve `Σ cₖ genₖ = target`; `None` if `target` is outside the span.
    pub(crate) fn solve_correction(&self, field: PrimeField, target: &[u32]) -> Option<Vec<u32>> {
        let cols = self.generator_vectors();
        if cols.is_empty() {
            return target.iter().all(|&t| t == 0).then(Vec::new);
        }
        FpMatrix::from_columns(field, target.len(), &cols).solve(target)
    }

    /// `(I + A, I + B)` for correction coefficients.
    pub(crate) fn correction_matrices(
        &self,
        ring: &GradedLocalAlgebra,
        coeffs: &[u32],
    ) -> (PresentationMatrix, PresentationMatrix) {
        let mut a = PresentationMatrix::identity(ring, self.rows);
        let mut b = PresentationMatrix::identity(ring, self.cols);
        for ((kind, _), &c) in self.generators.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            let term = ring.scale(
                &ring.var(match kind {
                    Correction::Left { v, .. } | Correction::Right { v, .. } => *v,
                }),
                c,
            );
            match *kind {
                Correction::Left { i, l, .. } => {
                    let v = ring.add(a.get(i, l), &term);
                    a.set(i, l, v);
                }
                Correction::Right { l, j, .. } => {
                    let v = ring.add(b.get(l, j), &term);
                    b.set(l, j, v);
                }
            }
        }
        (a, b)
    }
}

/// Particular solution and kernel of `A x = b`.
pub(crate) fn affine_solution_space(a: &FpMatrix, b: &[u32]) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let x0 = a.solve(b)?;
    Some((x0, a.kernel()))
}

/// Scalar matrix `F_p^{n×n}` → ring matrix.
pub(crate) fn lift_scalar(ring: &GradedLocalAlgebra, m: &FpMatrix) -> PresentationMatrix {
    let mut out = PresentationMatrix::zeros(ring, m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, ring.scalar(m.get(i, j)));
        }
    }
    out
}

/// The linear system in `Q₀` (`c × c`, row-major unknowns) expressing
/// `(P₀ Lᵥ) Q₀` entry `(i, j)` for every variable `v`; rows are ordered
/// `(v, i, j)`.
pub(crate) fn right_factor_system(
    field: PrimeField,
    left_times_linear: &[FpMatrix],
    c: usize,
) -> FpMatrix {
    let r = left_times_linear.first().map_or(0, |m| m.rows());
    let mut sys = FpMatrix::zeros(field, left_times_linear.len() * r * c, c * c);
    for (v, pl) in left_times_linear.iter().enumerate() {
        for i in 0..r {
            for j in 0..c {
                let row = (v * r + i) * c + j;
                for a in 0..c {
                    sys.set(row, a * c + j, pl.get(i, a));
                }
            }
        }
    }
    sys
}

pub(crate) fn matrix_from_flat(field: PrimeField, n: usize, flat: &[u32]) -> FpMatrix {
    let rows: Vec<Vec<u32>> = flat.chunks(n).map(|c| c.to_vec()).collect();
    FpMatrix::from_rows(field, n, &rows)
}

/// Decides `M₁ ≅ M₂` (equivalence of minimal presentation matrices).
///
/// Returns a verified witness, `None` when the exhaustive search proves
/// inequivalence, or [`Error::BudgetExceeded`] when the search would need
/// more than `budget` scalar candidates.
pub fn is_equivalent(
    ring: &GradedLocalAlgebra,
    m1: &PresentationMatrix,
    m2: &PresentationMatrix,
    budget: u64,
) -> Result<Option<EquivalenceWitness>> {
    if !m1.is_minimal() || !m2.is_minimal() {
        return Err(Error::NotMinimal);
    }
    if m1.shape() != m2.shape() {
        return Ok(None);
    }
    let (r, c) = m1.shape();
    if m1 == m2 {
        return Ok(Some(EquivalenceWitness::identity(ring, r, c)));
    }
    let field = ring.field();
    let s2 = ring.m2_dim();
    let p = field.characteristic();
    let gl = gl_order(p, r);
    if gl > budget {
        return Err(Error::BudgetExceeded { needed: gl, budget });
    }
    let mut spent = Budget::new(budget);
    let nf1 = NormalFormData::new(ring, m1);
    let lin2 = m2.linear_parts(ring);
    let quad2 = quad_vector(ring, m2);
    let rhs: Vec<u32> = lin2
        .iter()
        .flat_map(|m| (0..r).flat_map(move |i| (0..c).map(move |j| m.get(i, j))))
        .collect();

    for p0 in general_linear_group(field, r) {
        spent.charge(1)?;
        let pl: Vec<FpMatrix> = nf1.linear.iter().map(|l| p0.mul(l)).collect();
        let sys = right_factor_system(field, &pl, c);
        let Some((base, dirs)) = affine_solution_space(&sys, &rhs) else {
            continue;
        };
        let count = (p as u64).saturating_pow(dirs.len() as u32);
        spent.charge(count)?;
        let p0_inv = p0.inverse().expect("invertible");
        for flat in affine_points(field, &base, &dirs) {
            let q0 = matrix_from_flat(field, c, &flat);
            let Some(q0_inv) = q0.inverse() else {
                continue;
            };
            let moved = quad_transform(field, s2, &quad2, (r, c), &p0_inv, &q0_inv);
            let target: Vec<u32> = moved
                .iter()
                .zip(&nf1.quad)
                .map(|(&a, &b)| field.sub(a, b))
                .collect();
            if !nf1.corrections.contains(&target) {
                continue;
            }
            let coeffs = nf1
                .solve_correction(field, &target)
                .expect("target lies in the correction span");
            let (a, b) = nf1.correction_matrices(ring, &coeffs);
            let witness = EquivalenceWitness {
                p: lift_scalar(ring, &p0).mul(ring, &a)?,
                q: b.mul(ring, &lift_scalar(ring, &q0))?,
            };
            if !witness.verify(ring, m1, m2) {
                return Err(Error::Invalid(
                    "internal error: equivalence witness failed verification".into(),
                ));
            }
            return Ok(Some(witness));
        }
    }
    Ok(None)
}
