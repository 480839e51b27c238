//! Run reports and the exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, certified, equivalent |
//! | 1 | property refuted: not totally reflexive, not equivalent, no UT form |
//! | 2 | inconclusive or search budget exceeded |
//! | 3 | input, parse or validation error |

use serde::Serialize;
use serde_json::Value;
use trmod_core::io::MatrixJson;
use trmod_core::{AlgebraSpec, Error};

pub const SUCCESS: u8 = 0;
pub const REFUTED: u8 = 1;
pub const INCONCLUSIVE: u8 = 2;
pub const INPUT_ERROR: u8 = 3;

#[derive(Debug, Serialize)]
pub struct RingInput {
    pub source: String,
    pub spec: AlgebraSpec,
}

#[derive(Debug, Serialize)]
pub struct MatrixInput {
    pub source: String,
    pub matrix: MatrixJson,
}

#[derive(Debug, Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingInput>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixInput>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub parameters: serde_json::Map<String, Value>,
}

/// What a command produced: the machine payload, a human rendering and
/// the exit code.
pub struct Outcome {
    pub exit: u8,
    pub status: &'static str,
    pub result: Value,
    pub human: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: String,
    pub exit_code: u8,
    pub inputs: Inputs,
    pub warnings: Vec<String>,
    pub result: Value,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u128,
    pub tool_version: String,
}

/// A failure before or during a command, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub exit: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            exit: INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::BudgetExceeded { .. } => INCONCLUSIVE,
            _ => INPUT_ERROR,
        };
        Failure {
            exit,
            message: e.to_string(),
        }
    }
}
