use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in F_p")]
    DivisionByZero,
    #[error("characteristic mismatch: F_{left} vs F_{right}")]
    CharacteristicMismatch { left: u32, right: u32 },
    #[error("{0} is not a supported prime characteristic")]
    InvalidCharacteristic(u32),

    #[error("parse error in `{input}`: {message}")]
    Parse { input: String, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("an algebra needs at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("relation `{0}` is not homogeneous of degree 2")]
    NonHomogeneousRelation(String),
    #[error("the relations do not force m^3 = 0 ({surviving} degree-3 monomial classes survive)")]
    CubeNonzero { surviving: usize },
    #[error("the relations kill every degree-2 monomial (m^2 = 0)")]
    SquareZero,

    #[error("the zero element was given where a nonzero element is required")]
    ZeroElement,
    #[error("unit is not a zero divisor")]
    UnitNotZeroDivisor,
    #[error("element vector has length {got}, algebra dimension is {expected}")]
    ElementLength { expected: usize, got: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not minimal (it has a unit entry)")]
    NotMinimal,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not upper triangular")]
    NotUpperTriangular,
    #[error("diagonal entry {index} (`{entry}`) is not an exact zero divisor")]
    NotExactZeroDivisor { index: usize, entry: String },

    #[error("search budget exceeded: needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("module is not certified totally reflexive")]
    NotCertified,

    #[error("formula requires char != 2")]
    CharacteristicTwo,
    #[error("extension class is not a cocycle")]
    NotCocycle,
    #[error("inputs do not form an extension: {0}")]
    NotExtension(String),
    #[error("expected a cyclic presentation by an exact zero divisor: {0}")]
    NotCyclicEzd(String),

    #[error("last row is not of the form (0, ..., 0, t)")]
    RowShapeAbsent,
    #[error(
        "syzygy reduction could not isolate the partner of `{0}`; input is not totally reflexive"
    )]
    CannotIsolate(String),

    #[error("{0}")]
    Invalid(String),
}
