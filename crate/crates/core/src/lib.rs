//! Exact computation with totally reflexive modules over graded local
//! algebras with `𝔪³ = 0` over small prime fields.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod expr;
pub mod ext;
pub mod field;
pub mod filtration;
pub mod io;
pub mod linalg;
pub mod modmat;
pub mod totref;

pub use algebra::{AlgebraSpec, ExactZeroDivisorPair, GradedLocalAlgebra, RingElement};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
