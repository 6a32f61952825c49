//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("denominator {denominator} vanishes modulo {modulus}")]
    ZeroCharacteristicDivision { denominator: String, modulus: u64 },

    #[error("operands belong to different ring contexts")]
    ContextMismatch,

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("quotient by an ideal with only zero generators")]
    DivisionByZeroGenerator,

    #[error("operation requires strictly positive variable weights")]
    NonPositiveWeights,

    #[error("graded piece is unbounded: supply an exponent bound for non-positive-weight variables")]
    UnboundedPiece,

    #[error("operation requires an N-graded presentation (no negative weights)")]
    NegativeWeights,

    #[error("generator `{generator}` is not weighted-homogeneous (degrees {degrees:?})")]
    NonHomogeneous {
        generator: String,
        degrees: Vec<i64>,
    },

    #[error("element `{0}` is not homogeneous of weighted degree 1")]
    NotDegreeOne(String),

    #[error("algebra is not N-graded with all positive weights equal to 1")]
    NotNGraded,

    #[error("base algebra must be concentrated in degree 0 (all weights zero)")]
    WeightedBase,

    #[error("context has no unique weight -1 variable")]
    MissingInverseVariable,

    #[error("ill-formed payload: {0}")]
    IllFormedPayload(String),

    #[error("negative exponent")]
    NegativeExponent,
}
