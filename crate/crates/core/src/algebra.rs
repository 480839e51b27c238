//! Graded local algebras `R = k ⊕ V ⊕ 𝔪²` with `𝔪³ = 0`.
//!
//! An algebra is presented by variables (a basis of `𝔪/𝔪²`) and homogeneous
//! quadratic relations. The basis of `R` is `1`, the variables, and the
//! degree-2 monomials that are not leading terms of the relation space; the
//! multiplication table records each product of two variables in that basis.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, parse_polynomial, Polynomial};
use crate::field::PrimeField;
use crate::linalg::{axpy, FpMatrix, Subspace};

/// Largest `|𝔪|` that [`GradedLocalAlgebra::enumerate_ezd`] will sweep.
pub const ENUMERATION_LIMIT: u64 = 1 << 22;

/// Ring definition as read from a ring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub characteristic: u32,
    pub variables: Vec<String>,
    pub relations: Vec<String>,
}

impl AlgebraSpec {
    /// `k[x,y,z]/(x², y², z², yz)` over `F_p`.
    pub fn s_ring(p: u32) -> Self {
        AlgebraSpec {
            characteristic: p,
            variables: vec!["x".into(), "y".into(), "z".into()],
            relations: vec!["x^2".into(), "y^2".into(), "z^2".into(), "y*z".into()],
        }
    }

    /// Parses the built-in name `S:<p>`.
    pub fn builtin(name: &str) -> Option<Self> {
        let p = name.strip_prefix("S:")?.parse().ok()?;
        Some(Self::s_ring(p))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            input: "ring definition".into(),
            message: e.to_string(),
        })
    }
}

/// Coefficient vector over the algebra basis `1, x_1..x_e, q_1..q_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    coeffs: Vec<u32>,
}

impl RingElement {
    pub fn from_coeffs(coeffs: Vec<u32>) -> Self {
        RingElement { coeffs }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scalar(&self) -> u32 {
        self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub characteristic: u32,
    pub variables: Vec<String>,
    pub hilbert_series: [usize; 3],
    pub length: usize,
    pub embedding_dimension: usize,
    pub socle_dimension: usize,
    pub socle_equals_m2: bool,
    pub m2_dim_is_e_minus_1: bool,
    pub length_is_2e: bool,
    pub gorenstein: bool,
    /// All of the above necessary conditions hold and the ring is not Gorenstein.
    pub admits_nontrivial_tr: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    /// k-basis of `(0 : a)` in reduced echelon form.
    pub basis: Vec<RingElement>,
    /// Minimal ideal generators, lifted from a basis of `I / 𝔪I`.
    pub generators: Vec<RingElement>,
    /// `a = 0`: the annihilator is the whole ring.
    pub whole_ring: bool,
}

/// `(a, b)` with `(0:a) = (b)` and `(0:b) = (a)`, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactZeroDivisorPair {
    a: RingElement,
    b: RingElement,
}

impl ExactZeroDivisorPair {
    pub fn new(ring: &GradedLocalAlgebra, a: RingElement, b: RingElement) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroElement);
        }
        if a.is_unit() || b.is_unit() {
            return Err(Error::UnitNotZeroDivisor);
        }
        let ok = ring.annihilator_space(&a).equals(&ring.principal_ideal(&b))
            && ring.annihilator_space(&b).equals(&ring.principal_ideal(&a));
        if !ok {
            return Err(Error::Invalid(format!(
                "({}, {}) is not an exact pair of zero divisors",
                ring.format(&a),
                ring.format(&b)
            )));
        }
        Ok(ExactZeroDivisorPair { a, b })
    }

    pub fn a(&self) -> &RingElement {
        &self.a
    }

    pub fn b(&self) -> &RingElement {
        &self.b
    }

    pub fn swapped(&self) -> Self {
        ExactZeroDivisorPair {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedLocalAlgebra {
    spec: AlgebraSpec,
    field: PrimeField,
    variables: Vec<String>,
    quad_labels: Vec<String>,
    /// `products[i * e + j]` = `x_i x_j` in the 𝔪² basis.
    products: Vec<Vec<u32>>,
    e: usize,
    s2: usize,
    gorenstein: bool,
}

fn quad_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i..n {
            v.push((i, j));
        }
    }
    v
}

fn cubic_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i..n {
            for l in j..n {
                v.push((i, j, l));
            }
        }
    }
    v
}

fn monomial_label(vars: &[String], i: usize, j: usize) -> String {
    if i == j {
        format!("{}^2", vars[i])
    } else {
        format!("{}*{}", vars[i], vars[j])
    }
}

impl GradedLocalAlgebra {
    pub fn build(spec: &AlgebraSpec) -> Result<Self> {
        let field = PrimeField::new(spec.characteristic)?;
        let n = spec.variables.len();
        if n < 2 {
            return Err(Error::TooFewVariables(n));
        }
        let mut seen = HashSet::new();
        for v in &spec.variables {
            if !expr::is_identifier(v) {
                return Err(Error::Parse {
                    input: v.clone(),
                    message: "not a valid variable name".into(),
                });
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }

        let pairs = quad_pairs(n);
        let pair_pos = |i: usize, j: usize| -> usize {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            pairs
                .iter()
                .position(|&q| q == (i, j))
                .expect("pair exists")
        };
        let mut relations = Subspace::zero(field, pairs.len());
        for rel in &spec.relations {
            let poly = parse_polynomial(rel, &spec.variables)?;
            let mut vec = vec![0u32; pairs.len()];
            for (exps, &c) in &poly {
                let c = field.reduce(c);
                if c == 0 {
                    continue;
                }
                if expr::total_degree(exps) != 2 {
                    return Err(Error::NonHomogeneousRelation(rel.clone()));
                }
                let idx: Vec<usize> = exps
                    .iter()
                    .enumerate()
                    .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
                    .collect();
                let pos = pair_pos(idx[0], idx[1]);
                vec[pos] = field.add(vec[pos], c);
            }
            relations.insert(vec);
        }

        let pivots: HashSet<usize> = relations.pivots().iter().copied().collect();
        let basis_pos: Vec<usize> = (0..pairs.len()).filter(|c| !pivots.contains(c)).collect();
        let s2 = basis_pos.len();
        if s2 == 0 {
            return Err(Error::SquareZero);
        }

        // Degree three: the ideal must contain every cubic monomial.
        let triples = cubic_triples(n);
        let triple_pos = |mut t: [usize; 3]| -> usize {
            t.sort_unstable();
            triples
                .iter()
                .position(|&q| q == (t[0], t[1], t[2]))
                .expect("triple exists")
        };
        let mut cubic = Subspace::zero(field, triples.len());
        for rel in relations.basis() {
            for v in 0..n {
                let mut w = vec![0u32; triples.len()];
                for (pos, &c) in rel.iter().enumerate() {
                    if c != 0 {
                        let (i, j) = pairs[pos];
                        let t = triple_pos([v, i, j]);
                        w[t] = field.add(w[t], c);
                    }
                }
                cubic.insert(w);
            }
        }
        if !cubic.is_full() {
            return Err(Error::CubeNonzero {
                surviving: triples.len() - cubic.dim(),
            });
        }

        let mut products = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0u32; pairs.len()];
                e[pair_pos(i, j)] = 1;
                let red = relations.reduce(&e);
                products[i * n + j] = basis_pos.iter().map(|&c| red[c]).collect();
            }
        }
        let quad_labels = basis_pos
            .iter()
            .map(|&c| monomial_label(&spec.variables, pairs[c].0, pairs[c].1))
            .collect();

        let mut ring = GradedLocalAlgebra {
            spec: spec.clone(),
            field,
            variables: spec.variables.clone(),
            quad_labels,
            products,
            e: n,
            s2,
            gorenstein: false,
        };
        ring.gorenstein = ring.socle().dim() == 1;
        Ok(ring)
    }

    pub fn s_ring(p: u32) -> Result<Self> {
        Self::build(&AlgebraSpec::s_ring(p))
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn dim(&self) -> usize {
        1 + self.e + self.s2
    }

    pub fn embedding_dim(&self) -> usize {
        self.e
    }

    pub fn m2_dim(&self) -> usize {
        self.s2
    }

    pub fn hilbert_series(&self) -> [usize; 3] {
        [1, self.e, self.s2]
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn is_gorenstein(&self) -> bool {
        self.gorenstein
    }

    /// Labels of the basis: `1`, variables, then 𝔪² monomials.
    pub fn basis_labels(&self) -> Vec<String> {
        std::iter::once("1".to_string())
            .chain(self.variables.iter().cloned())
            .chain(self.quad_labels.iter().cloned())
            .collect()
    }

    /// Degree of basis index `k`.
    pub fn basis_degree(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else if k <= self.e {
            1
        } else {
            2
        }
    }

    /// `b_i b_j` in the basis (the structure constants `c_ij·`).
    pub fn structure_constants(&self, i: usize, j: usize) -> Vec<u32> {
        self.mul(&self.basis_element(i), &self.basis_element(j))
            .into_coeffs()
    }

    // ---- elements ----

    pub fn zero(&self) -> RingElement {
        RingElement::from_coeffs(vec![0; self.dim()])
    }

    pub fn one(&self) -> RingElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u32) -> RingElement {
        let mut v = vec![0; self.dim()];
        v[0] = c % self.characteristic();
        RingElement::from_coeffs(v)
    }

    pub fn basis_element(&self, k: usize) -> RingElement {
        let mut v = vec![0; self.dim()];
        v[k] = 1;
        RingElement::from_coeffs(v)
    }

    pub fn var(&self, i: usize) -> RingElement {
        self.basis_element(1 + i)
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<RingElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::ElementLength {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        let p = self.characteristic();
        Ok(RingElement::from_coeffs(
            coeffs.into_iter().map(|c| c % p).collect(),
        ))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.field;
        RingElement::from_coeffs(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f.add(x, y))
                .collect(),
        )
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.field;
        RingElement::from_coeffs(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f.sub(x, y))
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let f = self.field;
        RingElement::from_coeffs(a.coeffs.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn scale(&self, a: &RingElement, c: u32) -> RingElement {
        let f = self.field;
        RingElement::from_coeffs(a.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Writes `a * b` into `out` (additively: `out += a*b`).
    pub(crate) fn mul_acc(&self, out: &mut [u32], a: &[u32], b: &[u32]) {
        let f = self.field;
        let e = self.e;
        let (a0, b0) = (a[0], b[0]);
        if a0 != 0 {
            axpy(f, out, a0, b);
        }
        if b0 != 0 {
            axpy(f, &mut out[1..], b0, &a[1..]);
        }
        for i in 0..e {
            let ai = a[1 + i];
            if ai == 0 {
                continue;
            }
            for j in 0..e {
                let bj = b[1 + j];
                if bj == 0 {
                    continue;
                }
                let c = f.mul(ai, bj);
                axpy(f, &mut out[1 + e..], c, &self.products[i * e + j]);
            }
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = vec![0; self.dim()];
        self.mul_acc(&mut out, &a.coeffs, &b.coeffs);
        RingElement::from_coeffs(out)
    }

    pub fn inverse(&self, a: &RingElement) -> Result<RingElement> {
        if !a.is_unit() {
            return Err(Error::Invalid(format!(
                "`{}` is not a unit",
                self.format(a)
            )));
        }
        // a = c(1 + n) with n ∈ 𝔪, so a⁻¹ = c⁻¹(1 - n + n²)
        let c_inv = self.field.inv(a.scalar())?;
        let n = {
            let mut n = self.scale(a, c_inv);
            n.coeffs[0] = 0;
            n
        };
        let n2 = self.mul(&n, &n);
        let inv = self.add(&self.sub(&self.one(), &n), &n2);
        Ok(self.scale(&inv, c_inv))
    }

    /// Lowest degree with a nonzero coefficient (`None` for zero).
    pub fn order(&self, a: &RingElement) -> Option<usize> {
        a.coeffs
            .iter()
            .position(|&c| c != 0)
            .map(|k| self.basis_degree(k))
    }

    pub fn in_m(&self, a: &RingElement) -> bool {
        a.coeffs[0] == 0
    }

    pub fn in_m2(&self, a: &RingElement) -> bool {
        a.coeffs[..=self.e].iter().all(|&c| c == 0)
    }

    /// Degree-1 coordinates (the image in `𝔪/𝔪²`).
    pub fn linear_part(&self, a: &RingElement) -> Vec<u32> {
        a.coeffs[1..=self.e].to_vec()
    }

    /// Degree-2 coordinates.
    pub fn quadratic_part(&self, a: &RingElement) -> Vec<u32> {
        a.coeffs[1 + self.e..].to_vec()
    }

    /// Colex order on coefficient vectors: the last basis coordinate is the
    /// most significant. On `S` this orders `x < x+y < x+z < x+y+z` and
    /// `y < z < y+z`.
    pub fn cmp_elements(&self, a: &RingElement, b: &RingElement) -> Ordering {
        a.coeffs.iter().rev().cmp(b.coeffs.iter().rev())
    }

    /// Every element of `𝔪` (`p^(dim-1)` of them), in colex order.
    pub fn elements_of_m(&self) -> Result<Vec<RingElement>> {
        let p = self.field.order();
        let n = self.dim() - 1;
        let total = p.checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > ENUMERATION_LIMIT {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget: ENUMERATION_LIMIT,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0u32; n];
        for _ in 0..total {
            let mut c = vec![0u32; self.dim()];
            c[1..].copy_from_slice(&digits);
            out.push(RingElement::from_coeffs(c));
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p as u32 {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    /// Degree-1 elements (no constant or quadratic part), excluding zero.
    pub fn linear_forms(&self) -> Vec<RingElement> {
        let p = self.characteristic();
        let e = self.e;
        let total = (p as u64).pow(e as u32);
        let mut out = Vec::new();
        let mut digits = vec![0u32; e];
        for _ in 0..total {
            if digits.iter().any(|&d| d != 0) {
                let mut c = vec![0u32; self.dim()];
                c[1..=e].copy_from_slice(&digits);
                out.push(RingElement::from_coeffs(c));
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        out.sort_by(|a, b| self.cmp_elements(a, b));
        out
    }

    // ---- parsing / printing ----

    pub fn parse(&self, src: &str) -> Result<RingElement> {
        let poly = parse_polynomial(src, &self.variables)?;
        Ok(self.from_polynomial(&poly))
    }

    pub fn from_polynomial(&self, poly: &Polynomial) -> RingElement {
        let f = self.field;
        let e = self.e;
        let mut out = vec![0u32; self.dim()];
        for (exps, &c) in poly {
            let c = f.reduce(c);
            if c == 0 {
                continue;
            }
            match expr::total_degree(exps) {
                0 => out[0] = f.add(out[0], c),
                1 => {
                    let i = exps.iter().position(|&k| k == 1).expect("degree one");
                    out[1 + i] = f.add(out[1 + i], c);
                }
                2 => {
                    let idx: Vec<usize> = exps
                        .iter()
                        .enumerate()
                        .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
                        .collect();
                    axpy(f, &mut out[1 + e..], c, &self.products[idx[0] * e + idx[1]]);
                }
                _ => {}
            }
        }
        RingElement::from_coeffs(out)
    }

    pub fn format(&self, a: &RingElement) -> String {
        let labels = self.basis_labels();
        let terms: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (_, 1) => labels[k].clone(),
                (_, c) => format!("{c}*{}", labels[k]),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    pub fn display<'a>(&'a self, a: &'a RingElement) -> impl fmt::Display + 'a {
        struct D<'a>(&'a GradedLocalAlgebra, &'a RingElement);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        D(self, a)
    }

    // ---- linear-algebra views ----

    /// Matrix of `r ↦ a·r` on the basis (column `k` is `a·b_k`).
    pub fn multiplication_matrix(&self, a: &RingElement) -> FpMatrix {
        let d = self.dim();
        let cols: Vec<Vec<u32>> = (0..d)
            .map(|k| self.mul(a, &self.basis_element(k)).into_coeffs())
            .collect();
        FpMatrix::from_columns(self.field, d, &cols)
    }

    /// The ideal `(g_1, …, g_m)` as a k-subspace.
    pub fn ideal(&self, gens: &[RingElement]) -> Subspace {
        let d = self.dim();
        let mut s = Subspace::zero(self.field, d);
        for g in gens {
            for k in 0..d {
                s.insert(self.mul(g, &self.basis_element(k)).into_coeffs());
            }
        }
        s
    }

    pub fn principal_ideal(&self, a: &RingElement) -> Subspace {
        self.ideal(std::slice::from_ref(a))
    }

    pub fn maximal_ideal(&self) -> Subspace {
        Subspace::spanned_by(
            self.field,
            self.dim(),
            (1..self.dim()).map(|k| self.basis_element(k).into_coeffs()),
        )
    }

    /// `𝔪·I` for an ideal (or any subspace) `I`.
    pub fn m_times(&self, ideal: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.field, self.dim());
        for v in ideal.basis() {
            let v = RingElement::from_coeffs(v.clone());
            for i in 0..self.e {
                s.insert(self.mul(&self.var(i), &v).into_coeffs());
            }
        }
        s
    }

    /// Minimal generators of an ideal via a basis of `I/𝔪I`.
    pub fn minimal_generators(&self, ideal: &Subspace) -> Vec<RingElement> {
        ideal
            .quotient_basis(&self.m_times(ideal))
            .into_iter()
            .map(RingElement::from_coeffs)
            .collect()
    }

    /// The canonical generator of `(a)`: reduced modulo `𝔪·(a)`, leading
    /// coefficient 1. Two elements generate the same ideal iff they have the
    /// same canonical generator.
    pub fn canonical_generator(&self, a: &RingElement) -> Option<RingElement> {
        self.minimal_generators(&self.principal_ideal(a))
            .into_iter()
            .next()
    }

    pub fn annihilator_space(&self, a: &RingElement) -> Subspace {
        Subspace::spanned_by(
            self.field,
            self.dim(),
            self.multiplication_matrix(a).kernel(),
        )
    }

    pub fn annihilator(&self, a: &RingElement) -> Annihilator {
        let space = self.annihilator_space(a);
        Annihilator {
            generators: self.minimal_generators(&space),
            basis: space
                .basis()
                .iter()
                .cloned()
                .map(RingElement::from_coeffs)
                .collect(),
            whole_ring: a.is_zero(),
        }
    }

    /// `(0 : 𝔪)`.
    pub fn socle(&self) -> Subspace {
        let d = self.dim();
        let mut stacked = FpMatrix::zeros(self.field, self.e * d, d);
        for i in 0..self.e {
            let m = self.multiplication_matrix(&self.var(i));
            for r in 0..d {
                for c in 0..d {
                    stacked.set(i * d + r, c, m.get(r, c));
                }
            }
        }
        Subspace::spanned_by(self.field, d, stacked.kernel())
    }

    pub fn m2(&self) -> Subspace {
        Subspace::spanned_by(
            self.field,
            self.dim(),
            (1 + self.e..self.dim()).map(|k| self.basis_element(k).into_coeffs()),
        )
    }

    pub fn ring_preconditions(&self) -> RingReport {
        let socle = self.socle();
        let e = self.e;
        let socle_equals_m2 = socle.equals(&self.m2());
        let m2_dim_is_e_minus_1 = self.s2 + 1 == e;
        let length_is_2e = self.dim() == 2 * e;
        let mut notes = Vec::new();
        if self.gorenstein {
            notes.push(
                "Gorenstein: the structure theorem for totally reflexive modules over \
                 non-Gorenstein rings is inapplicable"
                    .to_string(),
            );
        }
        if !socle_equals_m2 {
            notes.push("socle differs from m^2".into());
        }
        if !m2_dim_is_e_minus_1 {
            notes.push(format!("dim m^2 = {} but e - 1 = {}", self.s2, e - 1));
        }
        RingReport {
            characteristic: self.characteristic(),
            variables: self.variables.clone(),
            hilbert_series: self.hilbert_series(),
            length: self.dim(),
            embedding_dimension: e,
            socle_dimension: socle.dim(),
            socle_equals_m2,
            m2_dim_is_e_minus_1,
            length_is_2e,
            gorenstein: self.gorenstein,
            admits_nontrivial_tr: socle_equals_m2
                && m2_dim_is_e_minus_1
                && length_is_2e
                && !self.gorenstein,
            notes,
        }
    }

    // ---- exact zero divisors ----

    /// The partner `b` with `(0:a) = (b)` and `(0:b) = (a)`, normalized to
    /// the canonical generator of `(0:a)`; `None` when `a` is not an exact
    /// zero divisor.
    pub fn exact_zero_divisor_partner(&self, a: &RingElement) -> Result<Option<RingElement>> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if a.is_unit() {
            return Err(Error::UnitNotZeroDivisor);
        }
        let ann = self.annihilator_space(a);
        let gens = self.minimal_generators(&ann);
        if gens.len() != 1 {
            return Ok(None);
        }
        let b = gens.into_iter().next().expect("one generator");
        if self.annihilator_space(&b).equals(&self.principal_ideal(a)) {
            Ok(Some(b))
        } else {
            Ok(None)
        }
    }

    pub fn is_exact_zero_divisor(&self, a: &RingElement) -> bool {
        matches!(self.exact_zero_divisor_partner(a), Ok(Some(_)))
    }

    /// All exact pairs, one per ideal `(a)`, `a` the canonical generator;
    /// sorted by [`Self::cmp_elements`].
    pub fn enumerate_ezd(&self) -> Result<Vec<ExactZeroDivisorPair>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for a in self.elements_of_m()? {
            if a.is_zero() {
                continue;
            }
            let g = self.canonical_generator(&a).expect("nonzero ideal");
            if !seen.insert(g.clone()) {
                continue;
            }
            if let Some(b) = self.exact_zero_divisor_partner(&g)? {
                out.push(ExactZeroDivisorPair { a: g, b });
            }
        }
        out.sort_by(|p, q| self.cmp_elements(&p.a, &q.a));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32) -> GradedLocalAlgebra {
        GradedLocalAlgebra::s_ring(p).unwrap()
    }

    #[test]
    fn s_ring_shape() {
        let r = s(3);
        assert_eq!(r.dim(), 6);
        assert_eq!(r.hilbert_series(), [1, 3, 2]);
        assert_eq!(r.basis_labels(), vec!["1", "x", "y", "z", "x*y", "x*z"]);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = |vars: &[&str], rels: &[&str]| AlgebraSpec {
            characteristic: 2,
            variables: vars.iter().map(|s| s.to_string()).collect(),
            relations: rels.iter().map(|s| s.to_string()).collect(),
        };
        assert_eq!(
            GradedLocalAlgebra::build(&spec(&["x", "y"], &["x^2", "y^2", "x*y"])).unwrap_err(),
            Error::SquareZero
        );
        assert!(matches!(
            GradedLocalAlgebra::build(&spec(&["x", "y"], &["x^2", "y"])),
            Err(Error::NonHomogeneousRelation(_))
        ));
        assert!(matches!(
            GradedLocalAlgebra::build(&spec(&["x", "y"], &["x^2"])),
            Err(Error::CubeNonzero { .. })
        ));
        assert!(matches!(
            GradedLocalAlgebra::build(&spec(&["x"], &[])),
            Err(Error::TooFewVariables(1))
        ));
        assert!(matches!(
            GradedLocalAlgebra::build(&spec(
                &["x", "y", "z"],
                &["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"]
            )),
            Err(Error::SquareZero)
        ));
    }

    #[test]
    fn gorenstein_flagged() {
        let spec = AlgebraSpec {
            characteristic: 3,
            variables: vec!["x".into(), "y".into()],
            relations: vec!["x^2".into(), "y^2".into()],
        };
        let r = GradedLocalAlgebra::build(&spec).unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(r.hilbert_series(), [1, 2, 1]);
        let rep = r.ring_preconditions();
        assert!(rep.gorenstein);
        assert!(rep.socle_equals_m2 && rep.m2_dim_is_e_minus_1 && rep.length_is_2e);
        assert!(!rep.admits_nontrivial_tr);
    }

    #[test]
    fn s_ring_preconditions() {
        for p in [2, 3, 5] {
            let rep = s(p).ring_preconditions();
            assert!(rep.admits_nontrivial_tr, "{rep:?}");
            assert_eq!(rep.socle_dimension, 2);
        }
    }

    #[test]
    fn multiplication_respects_relations() {
        let r = s(3);
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        let z = r.parse("z").unwrap();
        assert!(r.mul(&y, &z).is_zero());
        assert!(r.mul(&x, &x).is_zero());
        assert_eq!(r.format(&r.mul(&x, &y)), "x*y");
        assert_eq!(r.parse("x*y*z").unwrap(), r.zero());
        assert_eq!(r.format(&r.parse("x - y").unwrap()), "x+2*y");
        let u = r.parse("1 + x + x*z").unwrap();
        assert_eq!(r.mul(&u, &r.inverse(&u).unwrap()), r.one());
    }

    #[test]
    fn annihilators() {
        let r = s(2);
        let ann = r.annihilator(&r.parse("x").unwrap());
        assert_eq!(ann.basis.len(), 3);
        assert_eq!(ann.generators, vec![r.parse("x").unwrap()]);
        let ann_y = r.annihilator(&r.parse("y").unwrap());
        assert_eq!(ann_y.basis.len(), 4);
        assert_eq!(ann_y.generators.len(), 2);
        let r3 = s(3);
        let ann = r3.annihilator(&r3.parse("x+y").unwrap());
        assert_eq!(ann.generators, vec![r3.parse("x-y").unwrap()]);
    }

    #[test]
    fn partners() {
        let r = s(2);
        let p = |e: &str| r.exact_zero_divisor_partner(&r.parse(e).unwrap()).unwrap();
        assert_eq!(p("x"), Some(r.parse("x").unwrap()));
        assert_eq!(p("x+y"), Some(r.parse("x+y").unwrap()));
        assert_eq!(p("y"), None);
        assert_eq!(
            r.exact_zero_divisor_partner(&r.one())
                .unwrap_err()
                .to_string(),
            "unit is not a zero divisor"
        );
        assert_eq!(
            r.exact_zero_divisor_partner(&r.zero()).unwrap_err(),
            Error::ZeroElement
        );
    }

    #[test]
    fn ezd_enumeration() {
        let r = s(2);
        let reps: Vec<String> = r
            .enumerate_ezd()
            .unwrap()
            .iter()
            .map(|p| r.format(p.a()))
            .collect();
        assert_eq!(reps, vec!["x", "x+y", "x+z", "x+y+z"]);
        let r3 = s(3);
        assert_eq!(r3.enumerate_ezd().unwrap().len(), 9);
    }
}
