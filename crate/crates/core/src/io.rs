//! JSON forms of matrices and computation results.
//!
//! Matrices are `{"rows": r, "cols": c, "entries": [["x", "z"], ["y", "x"]]}`
//! with entries in the same expression grammar as ring relations.

use serde::{Deserialize, Serialize};

use crate::algebra::{GradedLocalAlgebra, RingElement};
use crate::error::{Error, Result};
use crate::ext::ExtSpace;
use crate::filtration::{Filtration, MbReport, UtSearch};
use crate::modmat::{EquivalenceWitness, PresentationMatrix};
use crate::totref::{Refutation, SpotCheck, TrCertificate, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_strings(ring),
        }
    }

    pub fn to_matrix(&self, ring: &GradedLocalAlgebra) -> Result<PresentationMatrix> {
        if self.entries.len() != self.rows {
            return Err(Error::Shape(format!(
                "declared {} rows but found {}",
                self.rows,
                self.entries.len()
            )));
        }
        if let Some(r) = self.entries.iter().find(|r| r.len() != self.cols) {
            return Err(Error::Shape(format!(
                "declared {} columns but a row has {}",
                self.cols,
                r.len()
            )));
        }
        if self.rows == 0 {
            return Ok(PresentationMatrix::zeros(ring, 0, self.cols));
        }
        PresentationMatrix::parse(ring, &self.entries)
    }
}

pub fn parse_matrix(ring: &GradedLocalAlgebra, text: &str) -> Result<PresentationMatrix> {
    let file: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        input: "matrix file".into(),
        message: e.to_string(),
    })?;
    file.to_matrix(ring)
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowJson {
    pub free_rank: usize,
    pub preperiod_length: usize,
    pub period_length: usize,
    pub betti: usize,
    pub coker_length: usize,
    pub preperiod: Vec<MatrixJson>,
    pub period: Vec<MatrixJson>,
    pub checks: Vec<SpotCheck>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TrJson {
    Certified(WindowJson),
    Refuted { witness: Refutation },
    Inconclusive { depth: usize },
}

impl TrJson {
    pub fn new(ring: &GradedLocalAlgebra, cert: &TrCertificate) -> Self {
        let mats = |v: &[PresentationMatrix]| -> Vec<MatrixJson> {
            v.iter().map(|m| MatrixJson::from_matrix(ring, m)).collect()
        };
        match &cert.verdict {
            Verdict::Certified(w) => TrJson::Certified(WindowJson {
                free_rank: w.free_rank,
                preperiod_length: w.preperiod_length(),
                period_length: w.period_length(),
                betti: w.betti,
                coker_length: w.coker_length,
                preperiod: mats(&w.preperiod),
                period: mats(&w.period),
                checks: w.checks.clone(),
            }),
            Verdict::Refuted(r) => TrJson::Refuted { witness: r.clone() },
            Verdict::Inconclusive { depth } => TrJson::Inconclusive { depth: *depth },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub p: MatrixJson,
    pub q: MatrixJson,
}

impl WitnessJson {
    pub fn new(ring: &GradedLocalAlgebra, w: &EquivalenceWitness) -> Self {
        WitnessJson {
            p: MatrixJson::from_matrix(ring, &w.p),
            q: MatrixJson::from_matrix(ring, &w.q),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtJson {
    pub rank: usize,
    pub unit_rank: usize,
    pub gamma: usize,
    pub syzygy: MatrixJson,
    /// Lifts of the basis classes.
    pub basis: Vec<MatrixJson>,
}

impl ExtJson {
    pub fn new(ring: &GradedLocalAlgebra, space: &ExtSpace) -> Self {
        ExtJson {
            rank: space.rank(),
            unit_rank: space.unit_rank(),
            gamma: space.gamma(),
            syzygy: MatrixJson::from_matrix(ring, &space.syzygy),
            basis: space
                .basis
                .iter()
                .map(|c| MatrixJson::from_matrix(ring, &c.lift))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationJson {
    pub chain: Vec<MatrixJson>,
    pub quotients: Vec<String>,
    pub lengths: Vec<usize>,
    pub log: Vec<String>,
}

impl FiltrationJson {
    pub fn new(ring: &GradedLocalAlgebra, f: &Filtration) -> Self {
        FiltrationJson {
            chain: f
                .chain
                .iter()
                .map(|m| MatrixJson::from_matrix(ring, m))
                .collect(),
            quotients: f.quotients.iter().map(|q| ring.format(q)).collect(),
            lengths: f.lengths.clone(),
            log: f.log.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum UtSearchJson {
    Found {
        form: MatrixJson,
        witness: WitnessJson,
        already_upper_triangular: bool,
    },
    NoneExists {
        scalar_pairs_covered: u64,
        candidates_examined: u64,
    },
}

impl UtSearchJson {
    pub fn new(ring: &GradedLocalAlgebra, s: &UtSearch) -> Self {
        match s {
            UtSearch::Found {
                witness,
                form,
                already_upper_triangular,
            } => UtSearchJson::Found {
                form: MatrixJson::from_matrix(ring, form),
                witness: WitnessJson::new(ring, witness),
                already_upper_triangular: *already_upper_triangular,
            },
            UtSearch::NoneExists {
                scalar_pairs_covered,
                candidates_examined,
            } => UtSearchJson::NoneExists {
                scalar_pairs_covered: *scalar_pairs_covered,
                candidates_examined: *candidates_examined,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MbJson {
    pub matrix: MatrixJson,
    pub preconditions: MbReport,
}

pub fn element_strings(ring: &GradedLocalAlgebra, xs: &[RingElement]) -> Vec<String> {
    xs.iter().map(|x| ring.format(x)).collect()
}
