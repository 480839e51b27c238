//! Certifying total reflexivity by growing a minimal free resolution.
//!
//! The resolution `⋯ → F₂ → F₁ → F₀` of `coker M` is grown one syzygy at a
//! time. On a non-Gorenstein ring a differential with a column in `𝔪²`, or
//! a non-square differential, rules out total reflexivity; a failure of
//! exactness in the dual complex exhibits `Extⁱ(M, R) ≠ 0`. Once a
//! differential repeats (literally, or up to equivalence `d_{k+1} = P dᵢ Q`)
//! the loop `dᵢ, …, d_{k−1}, d_k P` is a periodic complex; if it and its
//! dual are exact all the way round it is totally acyclic, `coker dᵢ` is
//! totally reflexive, and vanishing of the earlier `Ext`s lifts that to `M`.

use serde::Serialize;

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::modmat::{
    coker_length, gl_order, is_equivalent, m2_column_combination, minimize, syzygy,
    PresentationMatrix, DEFAULT_BUDGET,
};

pub const DEFAULT_DEPTH: usize = 32;

/// Steps of literal comparison before equivalence checks start.
const LITERAL_WINDOW: usize = 6;

#[derive(Clone, Copy, Debug)]
pub struct TrOptions {
    pub depth: usize,
    /// Scalar-candidate budget for each equivalence check.
    pub budget: u64,
}

impl Default for TrOptions {
    fn default() -> Self {
        TrOptions {
            depth: DEFAULT_DEPTH,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Exactness at the spot between `dᵢ` and `dᵢ₊₁`, in the complex and in
/// its dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub spot: usize,
    pub forward: bool,
    pub dual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWindow {
    /// Free summands split off the input before resolving.
    pub free_rank: usize,
    /// `d₁, …, d_{s−1}` (after removing free summands).
    pub preperiod: Vec<PresentationMatrix>,
    /// `d_s, …, d_{s+L−1}`; the differential after the last is the first
    /// again. Empty when the module is free.
    pub period: Vec<PresentationMatrix>,
    /// Common size of the square differentials.
    pub betti: usize,
    /// `length(coker d₁)` of the free-summand-free part.
    pub coker_length: usize,
    pub checks: Vec<SpotCheck>,
}

impl PeriodicWindow {
    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    pub fn preperiod_length(&self) -> usize {
        self.preperiod.len()
    }

    fn all(&self) -> impl Iterator<Item = &PresentationMatrix> {
        self.preperiod.iter().chain(&self.period)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// The `step`-th syzygy has `k` as a direct summand, because `d_step`
    /// has (after a column operation) a column in `𝔪²`.
    KSummand { step: usize, combination: Vec<u32> },
    NonSquare {
        step: usize,
        rows: usize,
        cols: usize,
    },
    NonConstantBetti {
        step: usize,
        previous: usize,
        current: usize,
    },
    /// `Extⁱ(M, R) ≠ 0`.
    ExtNonvanishing { degree: usize },
    /// `Extⁱ(M*, R) ≠ 0`.
    DualExtNonvanishing { degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified(PeriodicWindow),
    Refuted(Refutation),
    Inconclusive { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrCertificate {
    pub input: PresentationMatrix,
    pub verdict: Verdict,
}

impl TrCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.verdict, Verdict::Refuted(_))
    }

    /// Replays the certificate from scratch. Inconclusive verdicts verify
    /// trivially.
    pub fn verify(&self, ring: &GradedLocalAlgebra) -> bool {
        match &self.verdict {
            Verdict::Certified(w) => verify_window(ring, &self.input, w),
            Verdict::Refuted(r) => verify_refutation(ring, &self.input, r),
            Verdict::Inconclusive { .. } => true,
        }
    }
}

/// `d·e = 0` and `ker d = im e`, compared by k-dimension.
pub fn exact_at(ring: &GradedLocalAlgebra, d: &PresentationMatrix, e: &PresentationMatrix) -> bool {
    if d.cols() != e.rows() {
        return false;
    }
    if !d.mul(ring, e).map(|p| p.is_zero()).unwrap_or(false) {
        return false;
    }
    let kernel = d.cols() * ring.dim() - d.linearize(ring).rank();
    kernel == e.linearize(ring).rank()
}

/// Exactness of `Hom(−, R)` at the spot between `d` and `e`.
pub fn dual_exact_at(
    ring: &GradedLocalAlgebra,
    d: &PresentationMatrix,
    e: &PresentationMatrix,
) -> bool {
    exact_at(ring, &e.transpose(), &d.transpose())
}

/// Splits `M ≅ [M′; 0]` by row operations: returns `M′` and the number
/// of zero rows removed, i.e. the rank of the free summand of `coker M`.
pub fn strip_free_summands(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
) -> (PresentationMatrix, usize) {
    let d = ring.dim();
    let mut m = m.clone();
    let mut free = 0;
    'outer: loop {
        if m.rows() == 0 {
            break;
        }
        if let Some(i) = (0..m.rows()).find(|&i| (0..m.cols()).all(|j| m.get(i, j).is_zero())) {
            m = m.delete_row(i);
            free += 1;
            continue;
        }
        // Row vectors u with u·M = 0.
        let left = m.transpose().linearize(ring).kernel();
        for u in left {
            if let Some(i) = (0..m.rows()).find(|&i| u[i * d] != 0) {
                let mut p = PresentationMatrix::identity(ring, m.rows());
                for l in 0..m.rows() {
                    p.set(
                        i,
                        l,
                        RingElement::from_coeffs(u[l * d..(l + 1) * d].to_vec()),
                    );
                }
                m = p.mul(ring, &m).expect("shapes agree").delete_row(i);
                free += 1;
                continue 'outer;
            }
        }
        break;
    }
    (m, free)
}

struct Growth {
    diffs: Vec<PresentationMatrix>,
    checks: Vec<SpotCheck>,
}

/// Decides total reflexivity of `coker M`, growing at most `depth`
/// differentials.
pub fn check_totally_reflexive(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
    opts: TrOptions,
) -> Result<TrCertificate> {
    if opts.depth < 1 {
        return Err(Error::InvalidDepth);
    }
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let input = m.clone();
    let (stripped, free_rank) = strip_free_summands(ring, &minimize(ring, m));
    let d1 = minimize(ring, &stripped);
    let certify = |verdict| {
        Ok(TrCertificate {
            input: input.clone(),
            verdict,
        })
    };
    if d1.rows() == 0 {
        return certify(Verdict::Certified(PeriodicWindow {
            free_rank,
            preperiod: Vec::new(),
            period: Vec::new(),
            betti: 0,
            coker_length: 0,
            checks: Vec::new(),
        }));
    }
    let strict = !ring.is_gorenstein();
    let mut g = Growth {
        diffs: vec![d1],
        checks: Vec::new(),
    };
    let mut equivalence_enabled = true;
    loop {
        let k = g.diffs.len();
        let dk = g.diffs[k - 1].clone();
        if strict {
            if let Some(r) = local_refutation(ring, &g.diffs, k) {
                return certify(Verdict::Refuted(r));
            }
        }
        if k > opts.depth {
            return certify(Verdict::Inconclusive { depth: opts.depth });
        }
        let next = syzygy(ring, &dk);
        let dual = dual_exact_at(ring, &dk, &next);
        g.checks.push(SpotCheck {
            spot: k,
            forward: true,
            dual,
        });
        if !dual {
            return certify(Verdict::Refuted(Refutation::ExtNonvanishing { degree: k }));
        }
        // Repetition: literal first, then up to equivalence.
        let mut hit: Option<(usize, Repeat)> = g
            .diffs
            .iter()
            .position(|d| *d == next)
            .map(|i| (i, Repeat::Literal));
        if hit.is_none() && equivalence_enabled && k + 1 > LITERAL_WINDOW {
            let n = next.rows();
            if gl_order(ring.characteristic(), n) > opts.budget {
                equivalence_enabled = false;
            } else {
                for (i, d) in g.diffs.iter().enumerate() {
                    if d.shape() != next.shape() {
                        continue;
                    }
                    match is_equivalent(ring, d, &next, opts.budget) {
                        Ok(Some(w)) => {
                            hit = Some((i, Repeat::Twisted(w.p)));
                            break;
                        }
                        Ok(None) => {}
                        Err(Error::BudgetExceeded { .. }) => {
                            equivalence_enabled = false;
                            break;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        if let Some((i, p)) = hit {
            let mut period: Vec<PresentationMatrix> = g.diffs[i..].to_vec();
            if let Repeat::Twisted(p) = p {
                let last = period.pop().expect("nonempty loop");
                period.push(last.mul(ring, &p)?);
            }
            let preperiod = g.diffs[..i].to_vec();
            let mut window = PeriodicWindow {
                free_rank,
                betti: g.diffs[0].rows(),
                coker_length: coker_length(ring, &g.diffs[0]),
                preperiod,
                period,
                checks: g.checks,
            };
            let l = window.period.len();
            for t in 0..l {
                let (a, b) = (&window.period[t], &window.period[(t + 1) % l]);
                let spot = window.preperiod.len() + t + 1;
                let forward = exact_at(ring, a, b);
                let dual = dual_exact_at(ring, a, b);
                if !(forward && dual) {
                    // A failed splice would contradict the repetition; fall
                    // back to the honest answer.
                    return certify(Verdict::Inconclusive { depth: k });
                }
                if !window.checks.iter().any(|c| c.spot == spot) {
                    window.checks.push(SpotCheck {
                        spot,
                        forward,
                        dual,
                    });
                }
            }
            window.checks.sort_by_key(|c| c.spot);
            return certify(Verdict::Certified(window));
        }
        g.diffs.push(next);
    }
}

enum Repeat {
    Literal,
    /// `d_{k+1} = P·dᵢ·Q`; carries `P`.
    Twisted(PresentationMatrix),
}

/// Necessary conditions on the `k`-th differential (non-Gorenstein rings).
fn local_refutation(
    ring: &GradedLocalAlgebra,
    diffs: &[PresentationMatrix],
    k: usize,
) -> Option<Refutation> {
    let d = &diffs[k - 1];
    if let Some(combination) = m2_column_combination(ring, d) {
        return Some(Refutation::KSummand {
            step: k,
            combination,
        });
    }
    if !d.is_square() {
        return Some(Refutation::NonSquare {
            step: k,
            rows: d.rows(),
            cols: d.cols(),
        });
    }
    if k >= 2 && diffs[k - 2].cols() != d.cols() {
        return Some(Refutation::NonConstantBetti {
            step: k,
            previous: diffs[k - 2].cols(),
            current: d.cols(),
        });
    }
    None
}

/// The minimal resolution of `coker M` with free summands removed, up to
/// `steps` differentials.
pub fn resolution(
    ring: &GradedLocalAlgebra,
    m: &PresentationMatrix,
    steps: usize,
) -> Vec<PresentationMatrix> {
    let (stripped, _) = strip_free_summands(ring, &minimize(ring, m));
    let mut out = vec![minimize(ring, &stripped)];
    while out.len() < steps {
        let next = syzygy(ring, out.last().unwrap());
        if next.cols() == 0 && next.rows() == 0 {
            break;
        }
        out.push(next);
    }
    out
}

fn verify_window(ring: &GradedLocalAlgebra, m: &PresentationMatrix, w: &PeriodicWindow) -> bool {
    let (stripped, free_rank) = strip_free_summands(ring, &minimize(ring, m));
    let d1 = minimize(ring, &stripped);
    if free_rank != w.free_rank {
        return false;
    }
    if w.period.is_empty() {
        return d1.rows() == 0 && w.preperiod.is_empty();
    }
    let first = w.all().next().unwrap();
    if *first != d1 {
        return false;
    }
    if !w
        .all()
        .all(|d| d.is_minimal() && d.rows() == w.betti && d.cols() == w.betti)
    {
        return false;
    }
    if !ring.is_gorenstein() && coker_length(ring, &d1) != w.betti * ring.embedding_dim() {
        return false;
    }
    let chain: Vec<&PresentationMatrix> = w.all().collect();
    for pair in chain.windows(2) {
        if !exact_at(ring, pair[0], pair[1]) || !dual_exact_at(ring, pair[0], pair[1]) {
            return false;
        }
    }
    let l = w.period.len();
    exact_at(ring, &w.period[l - 1], &w.period[0])
        && dual_exact_at(ring, &w.period[l - 1], &w.period[0])
}

fn verify_refutation(ring: &GradedLocalAlgebra, m: &PresentationMatrix, r: &Refutation) -> bool {
    let needed = match r {
        Refutation::KSummand { step, .. }
        | Refutation::NonSquare { step, .. }
        | Refutation::NonConstantBetti { step, .. } => *step,
        Refutation::ExtNonvanishing { degree } | Refutation::DualExtNonvanishing { degree } => {
            degree + 1
        }
    };
    let res = resolution(ring, m, needed);
    if res.len() < needed {
        return false;
    }
    let gorenstein = ring.is_gorenstein();
    match r {
        Refutation::KSummand { step, combination } => {
            let d = &res[step - 1];
            if gorenstein || combination.len() != d.cols() || combination.iter().all(|&c| c == 0) {
                return false;
            }
            let lam =
                FpMatrix::from_columns(ring.field(), d.cols(), std::slice::from_ref(combination));
            let col = d.scalar_right(ring, &lam);
            (0..col.rows()).all(|i| ring.in_m2(col.get(i, 0)))
        }
        Refutation::NonSquare { step, rows, cols } => {
            let d = &res[step - 1];
            !gorenstein && d.rows() == *rows && d.cols() == *cols && rows != cols
        }
        Refutation::NonConstantBetti {
            step,
            previous,
            current,
        } => {
            !gorenstein
                && *step >= 2
                && res[step - 2].cols() == *previous
                && res[step - 1].cols() == *current
                && previous != current
        }
        Refutation::ExtNonvanishing { degree } => {
            *degree >= 1 && !dual_exact_at(ring, &res[degree - 1], &res[*degree])
        }
        Refutation::DualExtNonvanishing { .. } => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalEvidence {
    pub entry: RingElement,
    pub partner: Option<RingElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtTrReport {
    pub totally_reflexive: bool,
    pub diagonal: Vec<DiagonalEvidence>,
}

/// For an upper triangular minimal `M` whose cokernel has no free
/// summand: totally reflexive iff every diagonal entry is an exact zero
/// divisor.
pub fn check_ut_tr(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Result<UtTrReport> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let (_, free) = strip_free_summands(ring, m);
    if free > 0 {
        return Err(Error::Invalid(format!(
            "the cokernel has a free summand of rank {free}; the diagonal test needs a presentation without one"
        )));
    }
    let mut diagonal = Vec::new();
    for entry in m.diagonal() {
        let partner = if entry.is_zero() {
            None
        } else {
            ring.exact_zero_divisor_partner(&entry)?
        };
        diagonal.push(DiagonalEvidence { entry, partner });
    }
    Ok(UtTrReport {
        totally_reflexive: diagonal.iter().all(|d| d.partner.is_some()),
        diagonal,
    })
}

/// A stretch `backward, …, d₀ | d₁, d₂, …` of a complete resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionWindow {
    /// `d_{−b+1}, …, d₀`, in homological order (the last maps onto the
    /// codomain of `d₁`'s target side).
    pub backward: Vec<PresentationMatrix>,
    /// `d₁, d₂, …`.
    pub forward: Vec<PresentationMatrix>,
}

impl ResolutionWindow {
    /// All differentials in order.
    pub fn differentials(&self) -> impl Iterator<Item = &PresentationMatrix> {
        self.backward.iter().chain(&self.forward)
    }
}

fn reversal(ring: &GradedLocalAlgebra, n: usize) -> PresentationMatrix {
    let mut j = PresentationMatrix::zeros(ring, n, n);
    for i in 0..n {
        j.set(i, n - 1 - i, ring.one());
    }
    j
}

/// The differential preceding `d` in a complete resolution:
/// `(J·syz(J dᵀ J)·J)ᵀ`, with `J` the order-reversing permutation so
/// triangular shapes survive.
fn previous_differential(
    ring: &GradedLocalAlgebra,
    d: &PresentationMatrix,
) -> Result<PresentationMatrix> {
    let (r, c) = d.shape();
    let jr = reversal(ring, r);
    let jc = reversal(ring, c);
    let flipped = jc.mul(ring, &d.transpose())?.mul(ring, &jr)?;
    let w = syzygy(ring, &flipped);
    let jw = reversal(ring, w.cols());
    Ok(jr.mul(ring, &w)?.mul(ring, &jw)?.transpose())
}

/// `window` differentials on each side of `coker M` in its complete
/// resolution, verified exact with exact dual.
pub fn complete_resolution(
    ring: &GradedLocalAlgebra,
    cert: &TrCertificate,
    window: usize,
) -> Result<ResolutionWindow> {
    let Verdict::Certified(w) = &cert.verdict else {
        return Err(Error::NotCertified);
    };
    if w.period.is_empty() {
        return Ok(ResolutionWindow {
            backward: Vec::new(),
            forward: Vec::new(),
        });
    }
    let mut forward = vec![w.all().next().unwrap().clone()];
    while forward.len() < window.max(1) {
        let next = syzygy(ring, forward.last().unwrap());
        forward.push(next);
    }
    let mut backward: Vec<PresentationMatrix> = Vec::new();
    let mut cur = forward[0].clone();
    for _ in 0..window {
        let prev = previous_differential(ring, &cur)?;
        backward.push(prev.clone());
        cur = prev;
    }
    backward.reverse();
    let out = ResolutionWindow { backward, forward };
    let all: Vec<&PresentationMatrix> = out.differentials().collect();
    for pair in all.windows(2) {
        if !exact_at(ring, pair[0], pair[1]) || !dual_exact_at(ring, pair[0], pair[1]) {
            return Err(Error::Invalid(
                "complete resolution failed its exactness check".into(),
            ));
        }
    }
    Ok(out)
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

    fn check(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> TrCertificate {
        let c = check_totally_reflexive(ring, m, TrOptions::default()).unwrap();
        assert!(c.verify(ring), "certificate does not replay: {c:?}");
        c
    }

    #[test]
    fn cyclic_ezd_has_period_one_in_char_two() {
        let r = s(2);
        let c = check(&r, &mat(&r, &[&["x"]]));
        let Verdict::Certified(w) = c.verdict else {
            panic!("{c:?}")
        };
        assert_eq!(w.period_length(), 1);
        assert_eq!(w.betti, 1);
        assert_eq!(w.coker_length, 3);
    }

    #[test]
    fn cyclic_ezd_alternates_in_char_three() {
        let r = s(3);
        let c = check(&r, &mat(&r, &[&["x+y"]]));
        let Verdict::Certified(w) = c.verdict else {
            panic!("{c:?}")
        };
        assert_eq!(w.period_length(), 2);
        assert_eq!(w.period[1], mat(&r, &[&["x-y"]]));
    }

    #[test]
    fn m2_column_refutes() {
        let r = s(2);
        let c = check(&r, &mat(&r, &[&["x*y"], &["x*z"]]));
        assert!(matches!(
            c.verdict,
            Verdict::Refuted(Refutation::KSummand { step: 1, .. })
        ));
    }

    #[test]
    fn non_ezd_is_refuted() {
        let r = s(2);
        let c = check(&r, &mat(&r, &[&["y"]]));
        assert!(c.is_refuted(), "{c:?}");
    }

    #[test]
    fn free_summands_are_split() {
        let r = s(3);
        let m = mat(&r, &[&["x"], &["0"]]);
        let c = check(&r, &m);
        let Verdict::Certified(w) = c.verdict else {
            panic!("{c:?}")
        };
        assert_eq!(w.free_rank, 1);
        let m = mat(&r, &[&["x"], &["x"]]);
        let (stripped, f) = strip_free_summands(&r, &m);
        assert_eq!((stripped.rows(), f), (1, 1));
    }

    #[test]
    fn depth_zero_is_an_error() {
        let r = s(2);
        let m = mat(&r, &[&["x"]]);
        assert_eq!(
            check_totally_reflexive(
                &r,
                &m,
                TrOptions {
                    depth: 0,
                    ..Default::default()
                }
            ),
            Err(Error::InvalidDepth)
        );
    }

    #[test]
    fn ut_diagonal_test() {
        let r = s(2);
        let yes = check_ut_tr(&r, &mat(&r, &[&["x", "y"], &["0", "x+y"]])).unwrap();
        assert!(yes.totally_reflexive);
        let no = check_ut_tr(&r, &mat(&r, &[&["y", "x"], &["0", "x"]])).unwrap();
        assert!(!no.totally_reflexive);
        assert!(no.diagonal[0].partner.is_none());
        assert!(check_ut_tr(&r, &mat(&r, &[&["x", "0"], &["y", "x"]])).is_err());
        assert!(check_ut_tr(&r, &mat(&r, &[&["x", "0"], &["0", "0"]])).is_err());
    }

    #[test]
    fn complete_resolution_keeps_triangular_shape() {
        let r = s(2);
        let m = mat(&r, &[&["x", "y"], &["0", "x"]]);
        let c = check(&r, &m);
        let win = complete_resolution(&r, &c, 4).unwrap();
        assert_eq!(win.backward.len(), 4);
        assert!(win.differentials().all(|d| d.is_upper_triangular()));
    }

    #[test]
    fn complete_resolution_alternates() {
        let r = s(3);
        let c = check(&r, &mat(&r, &[&["x+y"]]));
        let win = complete_resolution(&r, &c, 2).unwrap();
        let a = mat(&r, &[&["x+y"]]);
        let b = mat(&r, &[&["x-y"]]);
        let seq: Vec<_> = win.differentials().cloned().collect();
        assert_eq!(seq, vec![a.clone(), b.clone(), a, b]);
    }
}
