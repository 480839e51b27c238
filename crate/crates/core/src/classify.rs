//! Isomorphism classes of small upper triangular totally reflexive modules
//! over a finite field.
//!
//! The candidates are `[[u, a], [0, t]]` with `u, t` exact zero divisors
//! (one generator per principal ideal) and `a` a nonzero linear form with
//! no term in the first variable. Decomposable candidates are dropped, the
//! rest are grouped by matrix equivalence, and each class is represented
//! by its smallest member in the order `(u, t, a)`, each compared colex.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::modmat::{is_equivalent, is_indecomposable, PresentationMatrix};

/// Generators of the cyclic totally reflexive modules `R/(a)`, one per
/// isomorphism class, in colex order.
pub fn enumerate_cyclic_tr(ring: &GradedLocalAlgebra) -> Result<Vec<RingElement>> {
    Ok(ring
        .enumerate_ezd()?
        .into_iter()
        .map(|pair| pair.a().clone())
        .collect())
}

/// Nonzero linear forms with zero coefficient on the first variable.
pub fn superdiagonal_candidates(ring: &GradedLocalAlgebra) -> Vec<RingElement> {
    ring.linear_forms()
        .into_iter()
        .filter(|a| a.coeffs()[1] == 0)
        .collect()
}

/// `[[u, a], [0, t]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtCandidate {
    pub u: RingElement,
    pub a: RingElement,
    pub t: RingElement,
}

impl UtCandidate {
    pub fn matrix(&self, ring: &GradedLocalAlgebra) -> PresentationMatrix {
        let mut m = PresentationMatrix::zeros(ring, 2, 2);
        m.set(0, 0, self.u.clone());
        m.set(0, 1, self.a.clone());
        m.set(1, 1, self.t.clone());
        m
    }

    /// Compares by `u`, then `t`, then `a`.
    pub fn cmp(&self, other: &Self, ring: &GradedLocalAlgebra) -> Ordering {
        ring.cmp_elements(&self.u, &other.u)
            .then_with(|| ring.cmp_elements(&self.t, &other.t))
            .then_with(|| ring.cmp_elements(&self.a, &other.a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub representative: UtCandidate,
    pub members: Vec<UtCandidate>,
}

#[derive(Clone, Debug)]
pub struct ClassTable {
    pub characteristic: u32,
    pub diagonal: Vec<RingElement>,
    pub enumerated: usize,
    pub decomposable: usize,
    pub classes: Vec<IsoClass>,
}

/// All candidates, grouped by `(u, t)` cell in order.
pub fn ut2_candidates(ring: &GradedLocalAlgebra) -> Result<Vec<UtCandidate>> {
    let diag = enumerate_cyclic_tr(ring)?;
    let sup = superdiagonal_candidates(ring);
    let mut out = Vec::with_capacity(diag.len() * diag.len() * sup.len());
    for u in &diag {
        for t in &diag {
            for a in &sup {
                out.push(UtCandidate {
                    u: u.clone(),
                    a: a.clone(),
                    t: t.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Classifies the given candidates up to isomorphism of their cokernels.
pub fn classify_candidates(
    ring: &GradedLocalAlgebra,
    candidates: &[UtCandidate],
    budget: u64,
) -> Result<ClassTable> {
    let flags: Vec<Result<bool>> = candidates
        .par_iter()
        .map(|c| Ok(is_indecomposable(ring, &c.matrix(ring), budget)?.is_indecomposable()))
        .collect();
    let mut indecomposable = Vec::new();
    for (c, f) in candidates.iter().zip(flags) {
        if f? {
            indecomposable.push(c.clone());
        }
    }
    // Process in order so each class is founded by its smallest member.
    indecomposable.sort_by(|a, b| a.cmp(b, ring));
    let mut classes: Vec<IsoClass> = Vec::new();
    for c in &indecomposable {
        let m = c.matrix(ring);
        let found = classes
            .par_iter()
            .map(|class| {
                let rep = class.representative.matrix(ring);
                is_equivalent(ring, &rep, &m, budget).map(|w| w.is_some())
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .position(|b| b);
        match found {
            Some(i) => classes[i].members.push(c.clone()),
            None => classes.push(IsoClass {
                representative: c.clone(),
                members: vec![c.clone()],
            }),
        }
    }
    Ok(ClassTable {
        characteristic: ring.characteristic(),
        diagonal: enumerate_cyclic_tr(ring)?,
        enumerated: candidates.len(),
        decomposable: candidates.len() - indecomposable.len(),
        classes,
    })
}

/// Isomorphism classes of indecomposable modules with a `2 × 2` upper
/// triangular presentation.
pub fn classify_ut2(ring: &GradedLocalAlgebra, budget: u64) -> Result<ClassTable> {
    let candidates = ut2_candidates(ring)?;
    if candidates.is_empty() {
        return Err(Error::Invalid(
            "the ring has no exact zero divisors in degree one".into(),
        ));
    }
    classify_candidates(ring, &candidates, budget)
}

impl ClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn indecomposable(&self) -> usize {
        self.enumerated - self.decomposable
    }

    /// Superdiagonal entries of the class representatives in cell `(u, t)`.
    pub fn cell(
        &self,
        ring: &GradedLocalAlgebra,
        u: &RingElement,
        t: &RingElement,
    ) -> Vec<RingElement> {
        let mut out: Vec<RingElement> = self
            .classes
            .iter()
            .map(|c| &c.representative)
            .filter(|r| r.u == *u && r.t == *t)
            .map(|r| r.a.clone())
            .collect();
        out.sort_by(|a, b| ring.cmp_elements(a, b));
        out
    }

    /// Rows `u`, columns `t`, cells list the representatives' `a`.
    pub fn render_grid(&self, ring: &GradedLocalAlgebra) -> String {
        let names: Vec<String> = self.diagonal.iter().map(|d| ring.format(d)).collect();
        let cells: Vec<Vec<String>> = self
            .diagonal
            .iter()
            .map(|u| {
                self.diagonal
                    .iter()
                    .map(|t| {
                        let a = self.cell(ring, u, t);
                        if a.is_empty() {
                            "-".to_string()
                        } else {
                            a.iter()
                                .map(|e| ring.format(e))
                                .collect::<Vec<_>>()
                                .join(", ")
                        }
                    })
                    .collect()
            })
            .collect();
        let head = "u \\ t".to_string();
        let w0 = names
            .iter()
            .map(|n| n.len())
            .max()
            .unwrap_or(0)
            .max(head.len());
        let widths: Vec<usize> = (0..names.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|row| row[j].chars().count())
                    .chain([names[j].len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let mut out = String::new();
        let _ = write!(out, "{head:<w0$} |");
        for (n, w) in names.iter().zip(&widths) {
            let _ = write!(out, " {n:<w$} |");
        }
        out.push('\n');
        let rule: usize = w0 + 2 + widths.iter().map(|w| w + 3).sum::<usize>();
        out.push_str(&"-".repeat(rule));
        out.push('\n');
        for (name, row) in names.iter().zip(&cells) {
            let _ = write!(out, "{name:<w0$} |");
            for (c, w) in row.iter().zip(&widths) {
                let pad = w - c.chars().count();
                let _ = write!(out, " {c}{} |", " ".repeat(pad));
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} classes from {} candidates ({} decomposable)",
            self.len(),
            self.enumerated,
            self.decomposable
        );
        out
    }

    pub fn to_json(&self, ring: &GradedLocalAlgebra) -> ClassTableJson {
        let show = |c: &UtCandidate| CandidateJson {
            u: ring.format(&c.u),
            a: ring.format(&c.a),
            t: ring.format(&c.t),
        };
        ClassTableJson {
            characteristic: self.characteristic,
            diagonal: self.diagonal.iter().map(|d| ring.format(d)).collect(),
            enumerated: self.enumerated,
            decomposable: self.decomposable,
            class_count: self.len(),
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    representative: show(&c.representative),
                    size: c.members.len(),
                    members: c.members.iter().map(show).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateJson {
    pub u: String,
    pub a: String,
    pub t: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub representative: CandidateJson,
    pub size: usize,
    pub members: Vec<CandidateJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassTableJson {
    pub characteristic: u32,
    pub diagonal: Vec<String>,
    pub enumerated: usize,
    pub decomposable: usize,
    pub class_count: usize,
    pub classes: Vec<ClassJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapCase {
    pub u: String,
    pub a: String,
    pub t: String,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapReport {
    pub characteristic: u32,
    /// Pairs with `u ≠ t` and `[[u, a], [0, t]]` indecomposable.
    pub cases: Vec<SwapCase>,
    /// `u = t`: the two matrices coincide.
    pub trivial: usize,
    /// Pairs skipped because the module splits (then swapping is harmless).
    pub decomposable: usize,
    /// All-isomorphic over `F₃`, none over `F₂`; unset otherwise.
    pub expected: Option<bool>,
    pub deviations: Vec<SwapCase>,
}

impl SwapReport {
    pub fn isomorphic_count(&self) -> usize {
        self.cases.iter().filter(|c| c.isomorphic).count()
    }
}

/// Tests `[[u, a], [0, t]] ≅ [[t, a], [0, u]]` over all candidates.
pub fn swap_isomorphism_check(ring: &GradedLocalAlgebra, budget: u64) -> Result<SwapReport> {
    let candidates = ut2_candidates(ring)?;
    let outcomes: Vec<Result<Option<Option<SwapCase>>>> = candidates
        .par_iter()
        .map(|c| {
            if c.u == c.t {
                return Ok(None);
            }
            let m = c.matrix(ring);
            if !is_indecomposable(ring, &m, budget)?.is_indecomposable() {
                return Ok(Some(None));
            }
            let swapped = UtCandidate {
                u: c.t.clone(),
                a: c.a.clone(),
                t: c.u.clone(),
            }
            .matrix(ring);
            let isomorphic = is_equivalent(ring, &m, &swapped, budget)?.is_some();
            Ok(Some(Some(SwapCase {
                u: ring.format(&c.u),
                a: ring.format(&c.a),
                t: ring.format(&c.t),
                isomorphic,
            })))
        })
        .collect();
    let expected = match ring.characteristic() {
        2 => Some(false),
        3 => Some(true),
        _ => None,
    };
    let mut cases = Vec::new();
    let (mut trivial, mut decomposable) = (0, 0);
    for o in outcomes {
        match o? {
            None => trivial += 1,
            Some(None) => decomposable += 1,
            Some(Some(case)) => cases.push(case),
        }
    }
    let deviations = match expected {
        Some(e) => cases
            .iter()
            .filter(|c| c.isomorphic != e)
            .cloned()
            .collect(),
        None => Vec::new(),
    };
    Ok(SwapReport {
        characteristic: ring.characteristic(),
        cases,
        trivial,
        decomposable,
        expected,
        deviations,
    })
}
