//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("recursion order must be at least 1")]
    OrderZero,

    #[error("{what}: expected {expected} entries, got {got}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("zero base: the constant and every initial value must be nonzero")]
    ZeroBase,

    #[error("non-finite value: the constant and initial values must be finite")]
    NonFiniteValue,

    #[error("exponents must be integers")]
    NonIntegerExponent,

    #[error("initial values are required for this operation")]
    MissingInitialValues,

    #[error("operation requires exact (rational) values, but the spec carries decimals")]
    InexactValue,

    #[error("bit budget exceeded: {bits} bits > {budget} bits")]
    OverflowBudgetExceeded { bits: u64, budget: u64 },

    #[error("modulus must be at least 2, got {modulus}")]
    InvalidModulus { modulus: u64 },

    #[error("tolerance must be a positive finite number")]
    ToleranceInvalid,

    #[error("root refinement failed: residual {residual:e} above tolerance {tol:e}")]
    RootFindingFailed { residual: f64, tol: f64 },

    #[error("coefficient system near-singular (condition estimate {condition:e}); \
             loosen the clustering threshold")]
    SingularSystem { condition: f64 },

    #[error("reference formulas only cover orders 1 and 2, got {order}")]
    UnsupportedOrder { order: usize },

    #[error("floating-point overflow to infinity")]
    OverflowToInfinity,

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Structured parse failure with a source position.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line of the offending character.
    pub line: usize,
    /// 1-based column of the offending character.
    pub col: usize,
    /// The token set the parser would have accepted here.
    pub expected: Vec<String>,
    /// What was actually found (a short snippet or "end of input").
    pub found: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, expected: Vec<String>, found: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            expected,
            found: found.into(),
        }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "parse error at line {}, column {}: expected {}, found {}",
            self.line,
            self.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}
