//! `Ext¹(coker N, coker M)` by linear algebra over `k`.
//!
//! With `F₂ --∂₂--> F₁ --N--> F₀` the start of a minimal resolution of
//! `coker N` and `Q = coker M`, a homomorphism `F_j → Q` is a tuple of
//! generator images in `Q`. Ext¹ is the cohomology of
//! `Q^{r₀} → Q^{r₁} → Q^{r₂}`, computed in `R^m` modulo `im M`.
//! A class is stored through a lift `α̃ ∈ Mat_{m × r₁}(R)` whose columns
//! are the images of the generators of `F₁`.

use serde::Serialize;

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{FpMatrix, Subspace};
use crate::modmat::{coker_length, syzygy, PresentationMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    /// `m × r₁` lift of the cocycle.
    pub lift: PresentationMatrix,
}

impl ExtensionClass {
    pub fn is_zero(&self) -> bool {
        self.lift.is_zero()
    }

    /// Some entry of the lift is a unit.
    pub fn has_unit_lift(&self) -> bool {
        self.lift.entries().iter().any(RingElement::is_unit)
    }
}

#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub n: PresentationMatrix,
    pub m: PresentationMatrix,
    /// `∂₂`, the first syzygy of `N`.
    pub syzygy: PresentationMatrix,
    pub basis: Vec<ExtensionClass>,
    cocycles: Subspace,
    coboundaries: Subspace,
    unit_rank: usize,
}

/// `R^m` blocks `(b, a)` flattened as `b·m·D + a·D + k`.
fn lift_from_vector(
    ring: &GradedLocalAlgebra,
    m: usize,
    r1: usize,
    v: &[u32],
) -> PresentationMatrix {
    let d = ring.dim();
    let mut out = PresentationMatrix::zeros(ring, m, r1);
    for b in 0..r1 {
        for a in 0..m {
            let off = b * m * d + a * d;
            out.set(a, b, RingElement::from_coeffs(v[off..off + d].to_vec()));
        }
    }
    out
}

fn vector_from_lift(ring: &GradedLocalAlgebra, lift: &PresentationMatrix) -> Vec<u32> {
    let mut v = Vec::with_capacity(lift.rows() * lift.cols() * ring.dim());
    for b in 0..lift.cols() {
        for a in 0..lift.rows() {
            v.extend_from_slice(lift.get(a, b).coeffs());
        }
    }
    v
}

/// `im M` repeated over `r` blocks.
fn image_power(ring: &GradedLocalAlgebra, image: &Subspace, m: usize, r: usize) -> Subspace {
    let block = m * ring.dim();
    let mut out = Subspace::zero(ring.field(), r * block);
    for b in 0..r {
        for g in image.basis() {
            let mut v = vec![0u32; r * block];
            v[b * block..(b + 1) * block].copy_from_slice(g);
            out.insert(v);
        }
    }
    out
}

/// Columns of `φ ↦ φ∘∂` for `∂` an `r_in × r_out` matrix, on
/// `(R^m)^{r_in} → (R^m)^{r_out}`.
fn precompose(ring: &GradedLocalAlgebra, del: &PresentationMatrix, m: usize) -> FpMatrix {
    let d = ring.dim();
    let (r_in, r_out) = del.shape();
    let mut cols = Vec::with_capacity(r_in * m * d);
    for a in 0..r_in {
        for row in 0..m {
            for k in 0..d {
                let e = ring.basis_element(k);
                let mut out = vec![0u32; r_out * m * d];
                for b in 0..r_out {
                    let prod = ring.mul(del.get(a, b), &e);
                    let off = b * m * d + row * d;
                    out[off..off + d].copy_from_slice(prod.coeffs());
                }
                cols.push(out);
            }
        }
    }
    FpMatrix::from_columns(ring.field(), r_out * m * d, &cols)
}

/// The k-space `Ext¹(coker N, coker M)` with an explicit basis.
pub fn ext1(
    ring: &GradedLocalAlgebra,
    n: &PresentationMatrix,
    m: &PresentationMatrix,
) -> Result<ExtSpace> {
    if !n.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let field = ring.field();
    let d = ring.dim();
    let rows = m.rows();
    let r1 = n.cols();
    let del2 = syzygy(ring, n);
    let r2 = del2.cols();
    let image = m.image(ring);

    // Cocycles: φ ∈ (R^m)^{r₁} with φ∘∂₂ ∈ (im M)^{r₂}.
    let h2 = precompose(ring, &del2, rows);
    let target = image_power(ring, &image, rows, r2);
    let reduced: Vec<Vec<u32>> = (0..h2.cols())
        .map(|c| target.reduce(&h2.column(c)))
        .collect();
    let kernel = if reduced.is_empty() || reduced[0].is_empty() {
        (0..r1 * rows * d)
            .map(|i| {
                let mut e = vec![0u32; r1 * rows * d];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        FpMatrix::from_columns(field, reduced[0].len(), &reduced).kernel()
    };
    let cocycles = Subspace::spanned_by(field, r1 * rows * d, kernel);

    let mut coboundaries = image_power(ring, &image, rows, r1);
    let h1 = precompose(ring, n, rows);
    for c in 0..h1.cols() {
        coboundaries.insert(h1.column(c));
    }
    debug_assert!(cocycles.contains_subspace(&coboundaries));

    let reps = cocycles.quotient_basis(&coboundaries);
    let basis: Vec<ExtensionClass> = reps
        .iter()
        .map(|v| ExtensionClass {
            lift: lift_from_vector(ring, rows, r1, v),
        })
        .collect();

    // Scalar parts of cocycles; coboundaries have none when M is minimal.
    let scalars = Subspace::spanned_by(
        field,
        rows * r1,
        reps.iter()
            .map(|v| (0..rows * r1).map(|t| v[t * d]).collect::<Vec<u32>>()),
    );
    Ok(ExtSpace {
        n: n.clone(),
        m: m.clone(),
        syzygy: del2,
        basis,
        cocycles,
        coboundaries,
        unit_rank: scalars.dim(),
    })
}

impl ExtSpace {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the classes admitting a lift with a unit entry
    /// (their pushouts have a free summand in the middle).
    pub fn unit_rank(&self) -> usize {
        self.unit_rank
    }

    /// Rank of the classes with no unit lift.
    pub fn gamma(&self) -> usize {
        self.rank() - self.unit_rank
    }

    pub fn is_cocycle(&self, ring: &GradedLocalAlgebra, class: &ExtensionClass) -> bool {
        class.lift.shape() == (self.m.rows(), self.n.cols())
            && self.cocycles.contains(&vector_from_lift(ring, &class.lift))
    }

    pub fn is_coboundary(&self, ring: &GradedLocalAlgebra, class: &ExtensionClass) -> bool {
        class.lift.shape() == (self.m.rows(), self.n.cols())
            && self
                .coboundaries
                .contains(&vector_from_lift(ring, &class.lift))
    }

    /// `Σ cᵢ basisᵢ`.
    pub fn combination(&self, ring: &GradedLocalAlgebra, coeffs: &[u32]) -> ExtensionClass {
        let field = ring.field();
        let len = self.m.rows() * self.n.cols() * ring.dim();
        let mut v = vec![0u32; len];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            crate::linalg::axpy(field, &mut v, *c, &vector_from_lift(ring, &b.lift));
        }
        ExtensionClass {
            lift: lift_from_vector(ring, self.m.rows(), self.n.cols(), &v),
        }
    }

    /// Coordinates of a cocycle in the basis, modulo coboundaries.
    pub fn coordinates(
        &self,
        ring: &GradedLocalAlgebra,
        class: &ExtensionClass,
    ) -> Result<Vec<u32>> {
        if !self.is_cocycle(ring, class) {
            return Err(Error::NotCocycle);
        }
        let target = self
            .coboundaries
            .reduce(&vector_from_lift(ring, &class.lift));
        let cols: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|b| self.coboundaries.reduce(&vector_from_lift(ring, &b.lift)))
            .collect();
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        FpMatrix::from_columns(ring.field(), target.len(), &cols)
            .solve(&target)
            .ok_or(Error::NotCocycle)
    }

    /// Middle term `[[M, −α̃], [0, N]]` of the extension `α`.
    pub fn pushout_middle(
        &self,
        ring: &GradedLocalAlgebra,
        class: &ExtensionClass,
    ) -> Result<PresentationMatrix> {
        if !self.is_cocycle(ring, class) {
            return Err(Error::NotCocycle);
        }
        let neg = PresentationMatrix::from_entries(
            ring,
            class.lift.rows(),
            class.lift.cols(),
            class.lift.entries().iter().map(|e| ring.neg(e)).collect(),
        )?;
        let zero = PresentationMatrix::zeros(ring, self.n.rows(), self.m.cols());
        Ok(PresentationMatrix::block(&self.m, &neg, &zero, &self.n))
    }
}

/// `[[v, −α̃], [0, u]]` for cyclic `S/(v)`, `S/(u)` and a scalar-entry lift.
pub fn pushout_middle(
    ring: &GradedLocalAlgebra,
    u: &RingElement,
    v: &RingElement,
    alpha: &RingElement,
) -> Result<PresentationMatrix> {
    let n = PresentationMatrix::cyclic(u.clone());
    let m = PresentationMatrix::cyclic(v.clone());
    let space = ext1(ring, &n, &m)?;
    let mut lift = PresentationMatrix::zeros(ring, 1, space.n.cols());
    lift.set(0, 0, alpha.clone());
    space.pushout_middle(ring, &ExtensionClass { lift })
}

/// The closed-form rank of `Ext¹(S/(x+dy+fz), S/(x+by+cz))` in
/// characteristic `≠ 2`.
pub fn ext1_rank_formula(
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
    f: FieldElement,
) -> Result<usize> {
    let field = b.field();
    for x in [c, d, f] {
        if x.field() != field {
            return Err(Error::CharacteristicMismatch {
                left: field.characteristic(),
                right: x.field().characteristic(),
            });
        }
    }
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let zero = field.zero();
    Ok(if [b, c, d, f].iter().all(|x| *x == zero) {
        3
    } else if (b == -d && c == -f) || (b == d && c == f) {
        2
    } else {
        1
    })
}

/// The closed form for the rank of non-unit classes.
pub fn gamma_formula(b: FieldElement, c: FieldElement, d: FieldElement, f: FieldElement) -> usize {
    let zero = b.field().zero();
    if [b, c, d, f].iter().all(|x| *x == zero) || (b == d && c == f) {
        2
    } else {
        1
    }
}

/// `Γ(N, T₁)` for cyclic presentations by exact zero divisors.
pub fn gamma(
    ring: &GradedLocalAlgebra,
    n: &PresentationMatrix,
    t1: &PresentationMatrix,
) -> Result<usize> {
    for m in [n, t1] {
        if m.shape() != (1, 1) {
            return Err(Error::NotCyclicEzd(format!(
                "{}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        if !ring.is_exact_zero_divisor(m.get(0, 0)) {
            return Err(Error::NotCyclicEzd(ring.format(m.get(0, 0))));
        }
    }
    Ok(ext1(ring, n, t1)?.gamma())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesRankReport {
    /// `rank Ext¹(C, Tᵢ)`.
    pub rank_middle: usize,
    /// `rank Ext¹(C, Tᵢ₋₁)`.
    pub rank_sub: usize,
    /// `rank Ext¹(C, C)`.
    pub rank_quotient: usize,
    pub inequality_holds: bool,
    pub gamma_middle: usize,
    pub gamma_sub: usize,
    pub gamma_quotient: usize,
    /// `2n` with `n` the number of generators of `Tᵢ`.
    pub bound: usize,
    pub rank_within_bound: bool,
    pub gamma_within_bound: bool,
}

/// Checks the long-exact-sequence bound for `0 → Tᵢ₋₁ → Tᵢ → C → 0`,
/// where `Tᵢ = [[Tᵢ₋₁, X], [0, C]]`.
pub fn les_rank_bound_check(
    ring: &GradedLocalAlgebra,
    c: &PresentationMatrix,
    t_prev: &PresentationMatrix,
    t_i: &PresentationMatrix,
) -> Result<LesRankReport> {
    let (pr, pc) = t_prev.shape();
    if t_i.shape() != (pr + c.rows(), pc + c.cols()) {
        return Err(Error::NotExtension("block sizes do not add up".into()));
    }
    for i in 0..t_i.rows() {
        for j in 0..t_i.cols() {
            let expected = match (i < pr, j < pc) {
                (true, true) => Some(t_prev.get(i, j)),
                (false, false) => Some(c.get(i - pr, j - pc)),
                (false, true) => None,
                (true, false) => continue,
            };
            let ok = match expected {
                Some(e) => t_i.get(i, j) == e,
                None => t_i.get(i, j).is_zero(),
            };
            if !ok {
                return Err(Error::NotExtension(format!(
                    "entry ({i}, {j}) does not match the block form"
                )));
            }
        }
    }
    if coker_length(ring, t_i) != coker_length(ring, t_prev) + coker_length(ring, c) {
        return Err(Error::NotExtension(
            "lengths are not additive, so the sequence is not exact on the left".into(),
        ));
    }
    let mid = ext1(ring, c, t_i)?;
    let sub = ext1(ring, c, t_prev)?;
    let quo = ext1(ring, c, c)?;
    let bound = 2 * t_i.rows();
    Ok(LesRankReport {
        rank_middle: mid.rank(),
        rank_sub: sub.rank(),
        rank_quotient: quo.rank(),
        inequality_holds: mid.rank() <= sub.rank() + quo.rank(),
        gamma_middle: mid.gamma(),
        gamma_sub: sub.gamma(),
        gamma_quotient: quo.gamma(),
        bound,
        rank_within_bound: mid.rank() <= bound,
        gamma_within_bound: mid.gamma() <= bound,
    })
}
