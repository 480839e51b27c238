//! Oracles shared by the integration tests. They avoid the library's
//! normal-form search and work from the definitions directly.

#![allow(dead_code)]

use trmod_core::linalg::{axpy, FpMatrix, Subspace};
use trmod_core::modmat::PresentationMatrix;
use trmod_core::{GradedLocalAlgebra, RingElement};

pub fn s(p: u32) -> GradedLocalAlgebra {
    GradedLocalAlgebra::s_ring(p).unwrap()
}

pub fn mat(ring: &GradedLocalAlgebra, rows: &[&[&str]]) -> PresentationMatrix {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    PresentationMatrix::parse(ring, &rows).unwrap()
}

/// `c₀x + c₁y + c₂z`, built by ring arithmetic.
pub fn linear(ring: &GradedLocalAlgebra, c: [u32; 3]) -> RingElement {
    let mut out = ring.zero();
    for (i, ci) in c.into_iter().enumerate() {
        out = ring.add(&out, &ring.scale(&ring.var(i), ci));
    }
    out
}

/// All `p^k` tuples over `F_p`, first coordinate fastest.
pub fn tuples(p: u32, k: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(k as u32);
    (0..total)
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let c = (idx % p as usize) as u32;
                    idx /= p as usize;
                    c
                })
                .collect()
        })
        .collect()
}

/// Whether `coker M₁ ≅ coker M₂` for minimal presentations with equal
/// row counts: some `φ ∈ Mat_n(R)` with `φ·im M₁ ⊆ im M₂` has an
/// invertible scalar part.
pub fn isomorphic(
    ring: &GradedLocalAlgebra,
    m1: &PresentationMatrix,
    m2: &PresentationMatrix,
) -> bool {
    let n = m1.rows();
    if m2.rows() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let f = ring.field();
    let d = ring.dim();
    let im2 = m2.image(ring);
    // One column per basis map `b·E_il`; its value is the image of every
    // column of M₁ reduced modulo im M₂.
    let mut cols = Vec::new();
    for i in 0..n {
        for l in 0..n {
            for k in 0..d {
                let b = ring.basis_element(k);
                let mut out = Vec::new();
                for j in 0..m1.cols() {
                    let mut v = vec![0u32; n * d];
                    let prod = ring.mul(&b, m1.get(l, j));
                    v[i * d..(i + 1) * d].copy_from_slice(prod.coeffs());
                    im2.reduce_in_place(&mut v);
                    out.extend(v);
                }
                cols.push(out);
            }
        }
    }
    let height = cols[0].len();
    let kernel = if height == 0 {
        (0..cols.len())
            .map(|t| {
                let mut e = vec![0u32; cols.len()];
                e[t] = 1;
                e
            })
            .collect()
    } else {
        FpMatrix::from_columns(f, height, &cols).kernel()
    };
    let tops = Subspace::spanned_by(
        f,
        n * n,
        kernel
            .iter()
            .map(|v| (0..n * n).map(|t| v[t * d]).collect::<Vec<u32>>()),
    );
    let p = f.characteristic() as u64;
    for mut idx in 0..p.pow(tops.dim() as u32) {
        let mut v = vec![0u32; n * n];
        for b in tops.basis() {
            axpy(f, &mut v, (idx % p) as u32, b);
            idx /= p;
        }
        let rows: Vec<Vec<u32>> = v.chunks(n).map(|c| c.to_vec()).collect();
        if FpMatrix::from_rows(f, n, &rows).is_invertible() {
            return true;
        }
    }
    false
}
