//! Endomorphisms of `coker M` and an exact indecomposability test.
//!
//! For minimal `M`, an endomorphism is induced by some `φ ∈ Mat_r(R)` with
//! `φ·im M ⊆ im M`. Endomorphisms with scalar part zero are nilpotent
//! (`𝔪³ = 0`), so `End(coker M)` is local exactly when the algebra `Ē` of
//! scalar parts is. `Ē` is local iff every element is invertible or
//! nilpotent.

use crate::algebra::GradedLocalAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{axpy, FpMatrix, Subspace};

use super::equiv::{affine_points, Budget};
use super::PresentationMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indecomposability {
    Indecomposable {
        /// `dim_k` of the scalar-part algebra of the endomorphism ring.
        end_top_dim: usize,
    },
    /// A non-trivial idempotent of the scalar-part algebra.
    Decomposable { idempotent: FpMatrix },
    /// `coker M = 0`.
    Zero,
}

impl Indecomposability {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self, Indecomposability::Indecomposable { .. })
    }
}

/// Scalar parts of endomorphism lifts, as flattened `r × r` matrices.
pub(crate) fn endomorphism_tops(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Subspace {
    let field = ring.field();
    let (r, c) = m.shape();
    let d = ring.dim();
    let image = m.image(ring);
    // Unknown (i, l, k): φ = basis_k · E_{il}.
    let mut columns = Vec::with_capacity(r * r * d);
    for i in 0..r {
        for l in 0..r {
            for k in 0..d {
                let b = ring.basis_element(k);
                let mut out = Vec::with_capacity(c * r * d);
                for j in 0..c {
                    let mut v = vec![0u32; r * d];
                    let prod = ring.mul(&b, m.get(l, j));
                    v[i * d..(i + 1) * d].copy_from_slice(prod.coeffs());
                    out.extend(image.reduce(&v));
                }
                columns.push(out);
            }
        }
    }
    let kernel = if columns[0].is_empty() {
        (0..columns.len())
            .map(|k| {
                let mut e = vec![0u32; columns.len()];
                e[k] = 1;
                e
            })
            .collect()
    } else {
        FpMatrix::from_columns(field, columns[0].len(), &columns).kernel()
    };
    Subspace::spanned_by(
        field,
        r * r,
        kernel.into_iter().map(|v| {
            let mut top = vec![0u32; r * r];
            for i in 0..r {
                for l in 0..r {
                    top[i * r + l] = v[(i * r + l) * d];
                }
            }
            top
        }),
    )
}

fn is_nilpotent(s: &FpMatrix) -> bool {
    let mut pow = s.clone();
    for _ in 1..s.rows() {
        pow = pow.mul(s);
    }
    pow.is_zero()
}

/// A power of `s` that is idempotent.
fn idempotent_power(s: &FpMatrix) -> FpMatrix {
    let mut seen = vec![s.clone()];
    loop {
        let next = seen.last().unwrap().mul(s);
        if let Some(i) = seen.iter().position(|m| *m == next) {
            // s^(i+1) = s^(len+1): period len - i from exponent i + 1.
            let period = seen.len() - i;
            let start = i + 1;
            let exp = start.div_ceil(period) * period;
            return seen[exp - 1].clone();
        }
        seen.push(next);
    }
}

/// Decides whether `coker M` is indecomposable, enumerating at most
/// `budget` elements of the scalar-part algebra.
pub fn is_indecomposable(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
    budget: u64,
) -> Result<Indecomposability> {
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let r = m.rows();
    if r == 0 {
        return Ok(Indecomposability::Zero);
    }
    let field = ring.field();
    let tops = endomorphism_tops(ring, m);
    let dim = tops.dim();
    if dim == 1 {
        return Ok(Indecomposability::Indecomposable { end_top_dim: 1 });
    }
    let as_matrix = |v: &[u32]| {
        let rows: Vec<Vec<u32>> = v.chunks(r).map(|c| c.to_vec()).collect();
        FpMatrix::from_rows(field, r, &rows)
    };
    let witness =
        |s: &FpMatrix| (!s.is_invertible() && !is_nilpotent(s)).then(|| idempotent_power(s));
    // Cheap candidates first: basis elements and their differences with I.
    let identity: Vec<u32> = FpMatrix::identity(field, r).row_major();
    for b in tops.basis() {
        for shift in 0..field.characteristic() {
            let mut v = b.clone();
            axpy(field, &mut v, shift, &identity);
            if let Some(e) = witness(&as_matrix(&v)) {
                return Ok(Indecomposability::Decomposable { idempotent: e });
            }
        }
    }
    let total = (field.characteristic() as u64).saturating_pow(dim as u32);
    Budget::new(budget).charge(total)?;
    let zero = vec![0u32; r * r];
    for v in affine_points(field, &zero, tops.basis()) {
        if let Some(e) = witness(&as_matrix(&v)) {
            return Ok(Indecomposability::Decomposable { idempotent: e });
        }
    }
    Ok(Indecomposability::Indecomposable { end_top_dim: dim })
}
