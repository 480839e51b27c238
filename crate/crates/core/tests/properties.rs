mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{isomorphic, s};
use trmod_core::classify::{classify_candidates, ut2_candidates};
use trmod_core::modmat::{
    coker_length, is_equivalent, is_indecomposable, minimize, syzygy, PresentationMatrix,
    DEFAULT_BUDGET,
};
use trmod_core::totref::{check_totally_reflexive, check_ut_tr, exact_at, TrOptions};
use trmod_core::{GradedLocalAlgebra, PrimeField, RingElement};

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn element(ring: &GradedLocalAlgebra, raw: &[u32]) -> RingElement {
    let p = ring.characteristic();
    ring.element(raw.iter().map(|c| c % p).collect()).unwrap()
}

/// An element of `𝔪` from raw coefficients.
fn in_m(ring: &GradedLocalAlgebra, raw: &[u32]) -> RingElement {
    let mut e = element(ring, raw);
    e = ring.sub(&e, &ring.scalar(e.scalar()));
    e
}

fn matrix_in_m(
    ring: &GradedLocalAlgebra,
    rows: usize,
    cols: usize,
    raw: &[Vec<u32>],
) -> PresentationMatrix {
    let entries = (0..rows * cols).map(|k| in_m(ring, &raw[k])).collect();
    PresentationMatrix::from_entries(ring, rows, cols, entries).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..1000, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(pi in 0usize..4, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = PrimeField::new(PRIMES[pi]).unwrap();
        let (a, b, c) = (a % f.characteristic(), b % f.characteristic(), c % f.characteristic());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn ring_axioms(pi in 0usize..4, a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = s(PRIMES[pi]);
        let (a, b, c) = (element(&r, &a), element(&r, &b), element(&r, &c));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        // m^3 = 0.
        let (ma, mb, mc) = (in_m(&r, a.coeffs()), in_m(&r, b.coeffs()), in_m(&r, c.coeffs()));
        prop_assert!(r.mul(&r.mul(&ma, &mb), &mc).is_zero());
        if a.is_unit() {
            prop_assert_eq!(r.mul(&a, &r.inverse(&a).unwrap()), r.one());
        }
    }

    #[test]
    fn syzygy_is_exact(pi in 0usize..2, raw in prop::collection::vec(coeffs(), 4)) {
        let r = s(PRIMES[pi]);
        let m = matrix_in_m(&r, 2, 2, &raw);
        let w = syzygy(&r, &m);
        prop_assert!(m.mul(&r, &w).unwrap().is_zero());
        prop_assert!(exact_at(&r, &m, &w));
        // Kernel vectors lie in mR^c exactly when no column is redundant.
        prop_assert_eq!(w.is_minimal(), minimize(&r, &m).cols() == m.cols());
    }

    #[test]
    fn certificates_replay(pi in 0usize..2, raw in prop::collection::vec(coeffs(), 4)) {
        let r = s(PRIMES[pi]);
        let m = matrix_in_m(&r, 2, 2, &raw);
        let cert = check_totally_reflexive(&r, &m, TrOptions::default()).unwrap();
        prop_assert!(cert.verify(&r));
    }

    #[test]
    fn minimize_keeps_the_cokernel(raw in prop::collection::vec(coeffs(), 4), units in prop::collection::vec(any::<bool>(), 4)) {
        let r = s(3);
        let entries = (0..4)
            .map(|k| if units[k] { element(&r, &raw[k]) } else { in_m(&r, &raw[k]) })
            .collect();
        let m = PresentationMatrix::from_entries(&r, 2, 2, entries).unwrap();
        let min = minimize(&r, &m);
        prop_assert!(min.is_minimal());
        prop_assert_eq!(coker_length(&r, &min), coker_length(&r, &m));
    }

    /// On minimal presentations, equivalence agrees with the Hom-space
    /// oracle, and its witnesses verify.
    #[test]
    fn equivalence_matches_oracle(a in prop::collection::vec(coeffs(), 4), b in prop::collection::vec(coeffs(), 4)) {
        let r = s(2);
        let m1 = matrix_in_m(&r, 2, 2, &a);
        let m2 = matrix_in_m(&r, 2, 2, &b);
        prop_assume!(minimize(&r, &m1).cols() == 2 && minimize(&r, &m2).cols() == 2);
        let w = is_equivalent(&r, &m1, &m2, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(w.is_some(), isomorphic(&r, &m1, &m2));
        if let Some(w) = w {
            prop_assert!(w.verify(&r, &m1, &m2));
        }
    }

    /// `P·M·Q` is equivalent to `M` for invertible `P, Q`, and the relation
    /// is symmetric.
    #[test]
    fn equivalence_orbit(a in prop::collection::vec(coeffs(), 4), p in prop::collection::vec(coeffs(), 4), q in prop::collection::vec(coeffs(), 4)) {
        let r = s(3);
        let m = matrix_in_m(&r, 2, 2, &a);
        let invertible = |raw: &[Vec<u32>]| {
            let entries: Vec<RingElement> = raw.iter().map(|c| element(&r, c)).collect();
            let det = r.sub(&r.mul(&entries[0], &entries[3]), &r.mul(&entries[1], &entries[2]));
            det.is_unit().then(|| PresentationMatrix::from_entries(&r, 2, 2, entries).unwrap())
        };
        let (Some(p), Some(q)) = (invertible(&p), invertible(&q)) else {
            return Ok(());
        };
        let moved = p.mul(&r, &m).unwrap().mul(&r, &q).unwrap();
        let there = is_equivalent(&r, &m, &moved, DEFAULT_BUDGET).unwrap();
        let back = is_equivalent(&r, &moved, &m, DEFAULT_BUDGET).unwrap();
        prop_assert!(there.is_some() && back.is_some());
        prop_assert!(there.unwrap().verify(&r, &m, &moved));
    }
}

#[test]
fn element_order_is_total() {
    let r = s(2);
    let els = r.elements_of_m().unwrap();
    for a in &els {
        for b in &els {
            let ab = r.cmp_elements(a, b);
            assert_eq!(ab, r.cmp_elements(b, a).reverse());
            assert_eq!(ab.is_eq(), a == b);
            for c in &els {
                if ab.is_le() && r.cmp_elements(b, c).is_le() {
                    assert!(r.cmp_elements(a, c).is_le());
                }
            }
        }
    }
}

#[test]
fn classification_ignores_input_order() {
    let r = s(2);
    let cands = ut2_candidates(&r).unwrap();
    let base = classify_candidates(&r, &cands, DEFAULT_BUDGET).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let mut shuffled = cands.clone();
        shuffled.shuffle(&mut rng);
        let again = classify_candidates(&r, &shuffled, DEFAULT_BUDGET).unwrap();
        assert_eq!(again.classes, base.classes);
    }
}

#[test]
fn representatives_are_tr_and_indecomposable() {
    let r = s(2);
    let table = classify_candidates(&r, &ut2_candidates(&r).unwrap(), DEFAULT_BUDGET).unwrap();
    for class in &table.classes {
        let m = class.representative.matrix(&r);
        assert!(check_ut_tr(&r, &m).unwrap().totally_reflexive);
        assert!(check_totally_reflexive(&r, &m, TrOptions::default())
            .unwrap()
            .is_certified());
        assert!(is_indecomposable(&r, &m, DEFAULT_BUDGET)
            .unwrap()
            .is_indecomposable());
        for member in &class.members {
            assert!(isomorphic(&r, &m, &member.matrix(&r)));
        }
    }
    // Distinct classes are not isomorphic.
    for (i, a) in table.classes.iter().enumerate() {
        for b in &table.classes[i + 1..] {
            assert!(!isomorphic(
                &r,
                &a.representative.matrix(&r),
                &b.representative.matrix(&r)
            ));
        }
    }
}
