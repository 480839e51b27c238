//! Filtrations by cyclic totally reflexive layers, upper triangular forms,
//! and the alternating family `M_b(s, t, u, v)`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::{ExactZeroDivisorPair, GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};
use crate::modmat::equiv::{
    affine_points, affine_solution_space, general_linear_group, lift_scalar, quad_vector, Budget,
};
use crate::modmat::{
    coker_length, gl_order, syzygy, EquivalenceWitness, NormalFormData, PresentationMatrix,
};

/// `0 = T₀ ⊂ T₁ ⊂ ⋯ ⊂ Tₙ` with `Tᵢ/Tᵢ₋₁ ≅ R/(tᵢᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// `Tᵢ` presented by the leading `i × i` block.
    pub chain: Vec<PresentationMatrix>,
    pub quotients: Vec<RingElement>,
    /// `length(Tᵢ)`.
    pub lengths: Vec<usize>,
    pub log: Vec<String>,
}

fn require_square_minimal_ut(m: &PresentationMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    if !m.is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    Ok(())
}

/// The filtration by leading blocks of an upper triangular presentation
/// with exact zero divisors on the diagonal.
pub fn filtrate_ut(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Result<Filtration> {
    require_square_minimal_ut(m)?;
    let n = m.rows();
    let e = ring.embedding_dim();
    let mut quotients = Vec::with_capacity(n);
    for (index, t) in m.diagonal().into_iter().enumerate() {
        if !ring.is_exact_zero_divisor(&t) {
            return Err(Error::NotExactZeroDivisor {
                index,
                entry: ring.format(&t),
            });
        }
        quotients.push(t);
    }
    let mut chain = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(n);
    let mut log = Vec::new();
    let mut previous = 0;
    for i in 1..=n {
        let ti = m.leading_block(i);
        let len = coker_length(ring, &ti);
        let quotient_len =
            coker_length(ring, &PresentationMatrix::cyclic(quotients[i - 1].clone()));
        if len != previous + quotient_len {
            return Err(Error::Invalid(format!(
                "step {i}: length {len} is not {previous} + {quotient_len}"
            )));
        }
        // Projection onto the last generator kills the image because the
        // last row of the block is (0, …, 0, tᵢᵢ).
        let last_row_ok = (0..i - 1).all(|j| ti.get(i - 1, j).is_zero());
        if !last_row_ok {
            return Err(Error::RowShapeAbsent);
        }
        log.push(format!(
            "T{i}: length {len} = {previous} + {quotient_len}, surjection onto R/({})",
            ring.format(&quotients[i - 1])
        ));
        if len != i * e {
            log.push(format!("T{i}: length {len} differs from {i}·{e}"));
        }
        previous = len;
        chain.push(ti);
        lengths.push(len);
    }
    Ok(Filtration {
        chain,
        quotients,
        lengths,
        log,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleStep {
    /// `T′`: `T` without its last row and column; `U = coker T′`.
    pub submodule: PresentationMatrix,
    /// `t_nn`, with `T/U ≅ R/(t_nn)`.
    pub quotient: RingElement,
    /// The syzygy of `T`, column-reduced so its last row is `(0, …, 0, s)`.
    pub reduced_syzygy: PresentationMatrix,
    pub partner: RingElement,
}

/// Peels off the last cyclic layer of `T`, whose last row is
/// `(0, …, 0, t)`.
pub fn submodule_step(ring: &GradedLocalAlgebra, t: &PresentationMatrix) -> Result<SubmoduleStep> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let n = t.rows();
    if n == 0 || (0..n - 1).any(|j| !t.get(n - 1, j).is_zero()) || t.get(n - 1, n - 1).is_zero() {
        return Err(Error::RowShapeAbsent);
    }
    let tnn = t.get(n - 1, n - 1).clone();
    let partner = ring
        .exact_zero_divisor_partner(&tnn)?
        .ok_or_else(|| Error::CannotIsolate(ring.format(&tnn)))?;
    let mut w = syzygy(ring, t);
    let cannot = || Error::CannotIsolate(ring.format(&tnn));
    let cols = w.cols();
    let last = n - 1;
    // Pivot: a column whose last-row entry generates (s).
    let target = ring.canonical_generator(&partner);
    let pivot = (0..cols)
        .find(|&j| ring.canonical_generator(w.get(last, j)) == target)
        .ok_or_else(cannot)?;
    let pivot_entry = w.get(last, pivot).clone();
    let mult = ring.multiplication_matrix(&pivot_entry);
    for j in (0..cols).filter(|&j| j != pivot) {
        let entry = w.get(last, j);
        if entry.is_zero() {
            continue;
        }
        let r = mult.solve(entry.coeffs()).ok_or_else(cannot)?;
        let r = RingElement::from_coeffs(r);
        for i in 0..w.rows() {
            let v = ring.sub(w.get(i, j), &ring.mul(&r, w.get(i, pivot)));
            w.set(i, j, v);
        }
    }
    // Move the pivot column to the end.
    let mut order: Vec<usize> = (0..cols).filter(|&j| j != pivot).collect();
    order.push(pivot);
    let w = w.select_columns(&order);
    let submodule = t.delete_row_col(last, last);
    let drop = coker_length(ring, t) - coker_length(ring, &submodule);
    if drop != coker_length(ring, &PresentationMatrix::cyclic(tnn.clone())) {
        return Err(Error::Invalid(format!(
            "length drops by {drop}, not by the length of the quotient"
        )));
    }
    Ok(SubmoduleStep {
        submodule,
        quotient: tnn,
        reduced_syzygy: w,
        partner: pivot_entry,
    })
}

/// Outcome of the search for an upper triangular equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UtSearch {
    Found {
        witness: EquivalenceWitness,
        form: PresentationMatrix,
        already_upper_triangular: bool,
    },
    /// Every scalar pair `(P₀, Q₀)` in `GL_n × GL_n` was covered.
    NoneExists {
        scalar_pairs_covered: u64,
        candidates_examined: u64,
    },
}

/// Sort key: diagonal entries, then the strict upper triangle row by row;
/// each entry colex (last basis coordinate most significant).
fn ut_key(m: &PresentationMatrix) -> Vec<u32> {
    let n = m.rows();
    let mut key = Vec::new();
    for i in 0..n {
        key.extend(m.get(i, i).coeffs().iter().rev());
    }
    for i in 0..n {
        for j in i + 1..n {
            key.extend(m.get(i, j).coeffs().iter().rev());
        }
    }
    key
}

/// Flat quadratic index `(i·n + j)·s₂ + q` in order of significance for
/// [`ut_key`].
fn quad_priority(n: usize, s2: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(n * n * s2);
    let push = |i: usize, j: usize, order: &mut Vec<usize>| {
        for q in (0..s2).rev() {
            order.push((i * n + j) * s2 + q);
        }
    };
    for i in 0..n {
        push(i, i, &mut order);
    }
    for i in 0..n {
        for j in i + 1..n {
            push(i, j, &mut order);
        }
    }
    for i in 0..n {
        for j in 0..i {
            push(i, j, &mut order);
        }
    }
    order
}

/// Searches for an upper triangular matrix equivalent to `M`, returning
/// the smallest one under [`ut_key`] order.
pub fn find_ut_form(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
    budget: u64,
) -> Result<UtSearch> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let n = m.rows();
    if m.is_upper_triangular() {
        return Ok(UtSearch::Found {
            witness: EquivalenceWitness::identity(ring, n, n),
            form: m.clone(),
            already_upper_triangular: true,
        });
    }
    let field = ring.field();
    let p = field.characteristic();
    let s2 = ring.m2_dim();
    let gl = gl_order(p, n);
    if gl > budget {
        return Err(Error::BudgetExceeded { needed: gl, budget });
    }
    let mut spent = Budget::new(budget);
    let linear = m.linear_parts(ring);
    let lower: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let lower_quad: Vec<usize> = lower
        .iter()
        .flat_map(|&(i, j)| (0..s2).map(move |q| (i * n + j) * s2 + q))
        .collect();
    let priority = quad_priority(n, s2);

    let mut best: Option<(Vec<u32>, EquivalenceWitness, PresentationMatrix)> = None;
    let mut examined = 0u64;
    for p0 in general_linear_group(field, n) {
        spent.charge(1)?;
        // Strictly lower entries of (P₀ Lᵥ) Q₀ vanish, for every v.
        let pl: Vec<FpMatrix> = linear.iter().map(|l| p0.mul(l)).collect();
        let mut sys = FpMatrix::zeros(field, pl.len() * lower.len(), n * n);
        for (v, plv) in pl.iter().enumerate() {
            for (row, &(i, j)) in lower.iter().enumerate() {
                for a in 0..n {
                    sys.set(v * lower.len() + row, a * n + j, plv.get(i, a));
                }
            }
        }
        let dirs = sys.kernel();
        spent.charge((p as u64).saturating_pow(dirs.len() as u32))?;
        for flat in affine_points(field, &vec![0u32; n * n], &dirs) {
            let rows: Vec<Vec<u32>> = flat.chunks(n).map(|c| c.to_vec()).collect();
            let q0 = FpMatrix::from_rows(field, n, &rows);
            if !q0.is_invertible() {
                continue;
            }
            examined += 1;
            let moved = m.scalar_left(ring, &p0).scalar_right(ring, &q0);
            let Some((witness, form)) = clear_lower_quadratic(ring, &moved, &lower_quad, &priority)
            else {
                continue;
            };
            let witness = EquivalenceWitness {
                p: witness.p.mul(ring, &lift_scalar(ring, &p0))?,
                q: lift_scalar(ring, &q0).mul(ring, &witness.q)?,
            };
            let key = ut_key(&form);
            let better = match &best {
                None => true,
                Some((k, _, _)) => key.cmp(k) == Ordering::Less,
            };
            if better {
                best = Some((key, witness, form));
            }
        }
    }
    match best {
        Some((_, witness, form)) => {
            if !witness.verify(ring, m, &form) || !form.is_upper_triangular() {
                return Err(Error::Invalid(
                    "internal error: upper triangular witness failed verification".into(),
                ));
            }
            Ok(UtSearch::Found {
                witness,
                form,
                already_upper_triangular: false,
            })
        }
        None => Ok(UtSearch::NoneExists {
            scalar_pairs_covered: gl.saturating_mul(gl),
            candidates_examined: examined,
        }),
    }
}

/// For `M` with upper triangular linear part: kills the strictly lower
/// quadratic part with a correction `(I + A) M (I + B)`, choosing the
/// smallest resulting upper quadratic part.
fn clear_lower_quadratic(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
    lower_quad: &[usize],
    priority: &[usize],
) -> Option<(EquivalenceWitness, PresentationMatrix)> {
    let field = ring.field();
    let nf = NormalFormData::new(ring, m);
    let x = quad_vector(ring, m);
    let gens = nf.generator_vectors();
    let total = x.len();
    // Coefficients κ with (Gκ)_lower = −X_lower.
    let mut sys = FpMatrix::zeros(field, lower_quad.len(), gens.len());
    for (row, &idx) in lower_quad.iter().enumerate() {
        for (c, g) in gens.iter().enumerate() {
            sys.set(row, c, g[idx]);
        }
    }
    let rhs: Vec<u32> = lower_quad.iter().map(|&i| field.neg(x[i])).collect();
    let (k0, dirs) = if gens.is_empty() {
        if rhs.iter().any(|&v| v != 0) {
            return None;
        }
        (Vec::new(), Vec::new())
    } else {
        affine_solution_space(&sys, &rhs)?
    };
    let apply = |kappa: &[u32]| {
        let mut v = vec![0u32; total];
        for (c, g) in kappa.iter().zip(&gens) {
            crate::linalg::axpy(field, &mut v, *c, g);
        }
        v
    };
    let mut base = x.clone();
    crate::linalg::axpy(field, &mut base, 1, &apply(&k0));
    let family = Subspace::spanned_by_with_order(
        field,
        total,
        priority.to_vec(),
        dirs.iter().map(|d| apply(d)),
    );
    let target = family.reduce(&base);
    let diff: Vec<u32> = target
        .iter()
        .zip(&x)
        .map(|(&a, &b)| field.sub(a, b))
        .collect();
    let kappa = nf.solve_correction(field, &diff)?;
    let (a, b) = nf.correction_matrices(ring, &kappa);
    let form = a.mul(ring, m).ok()?.mul(ring, &b).ok()?;
    Some((EquivalenceWitness { p: a, q: b }, form))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MbReport {
    pub exact_pair: bool,
    pub u_in_m_not_m2: bool,
    pub v_in_m_not_m2: bool,
    pub uv_zero: bool,
    /// `s, t, u` linearly independent modulo `𝔪²`.
    pub condition_a: bool,
    /// `s ∈ (t) + 𝔪²` and `u, v ∉ (t) + 𝔪²`.
    pub condition_b: bool,
    pub warnings: Vec<String>,
}

impl MbReport {
    pub fn preconditions_hold(&self) -> bool {
        self.exact_pair
            && self.u_in_m_not_m2
            && self.v_in_m_not_m2
            && self.uv_zero
            && (self.condition_a || self.condition_b)
    }
}

/// The `b × b` upper triangular matrix with `s, t, s, …` on the diagonal
/// and `u, v, u, …` just above it, plus a report on the hypotheses under
/// which it presents an indecomposable totally reflexive module.
pub fn mb_matrix(
    ring: &GradedLocalAlgebra,
    b: usize,
    s: &RingElement,
    t: &RingElement,
    u: &RingElement,
    v: &RingElement,
) -> Result<(PresentationMatrix, MbReport)> {
    if b == 0 {
        return Err(Error::Invalid("b must be at least 1".into()));
    }
    let mut m = PresentationMatrix::zeros(ring, b, b);
    for i in 0..b {
        m.set(i, i, if i % 2 == 0 { s.clone() } else { t.clone() });
        if i + 1 < b {
            m.set(i, i + 1, if i % 2 == 0 { u.clone() } else { v.clone() });
        }
    }
    Ok((m, mb_preconditions(ring, s, t, u, v)))
}

pub fn mb_preconditions(
    ring: &GradedLocalAlgebra,
    s: &RingElement,
    t: &RingElement,
    u: &RingElement,
    v: &RingElement,
) -> MbReport {
    let field = ring.field();
    let fmt = |a: &RingElement| ring.format(a);
    let exact_pair = ExactZeroDivisorPair::new(ring, s.clone(), t.clone()).is_ok();
    let linear_only = |a: &RingElement| ring.in_m(a) && !ring.in_m2(a);
    let u_ok = linear_only(u);
    let v_ok = linear_only(v);
    let uv_zero = ring.mul(u, v).is_zero();
    let lin = |a: &RingElement| ring.linear_part(a);
    let rank = |vs: &[Vec<u32>]| FpMatrix::from_rows(field, ring.embedding_dim(), vs).rank();
    let condition_a = rank(&[lin(s), lin(t), lin(u)]) == 3;
    let t_line = Subspace::spanned_by(field, ring.embedding_dim(), [lin(t)]);
    let condition_b =
        t_line.contains(&lin(s)) && !t_line.contains(&lin(u)) && !t_line.contains(&lin(v));
    let mut warnings = Vec::new();
    if !exact_pair {
        warnings.push(format!(
            "({}, {}) is not an exact pair of zero divisors",
            fmt(s),
            fmt(t)
        ));
    }
    if !u_ok {
        warnings.push(format!("u = {} is not in 𝔪 \\ 𝔪²", fmt(u)));
    }
    if !v_ok {
        warnings.push(format!("v = {} is not in 𝔪 \\ 𝔪²", fmt(v)));
    }
    if !uv_zero {
        warnings.push(format!("uv = {} is nonzero", fmt(&ring.mul(u, v))));
    }
    if !condition_a && !condition_b {
        warnings.push("neither independence condition (a) nor (b) holds".into());
    }
    MbReport {
        exact_pair,
        u_in_m_not_m2: u_ok,
        v_in_m_not_m2: v_ok,
        uv_zero,
        condition_a,
        condition_b,
        warnings,
    }
}
