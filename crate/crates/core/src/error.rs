use thiserror::Error;

use crate::report::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("field modulus {0} is outside the supported range 2..=251")]
    FieldOutOfRange(u32),

    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("no solution: right-hand side is not in the image")]
    NoSolution,

    #[error("element index {idx} out of range for a space of size {size}")]
    IndexOutOfRange { idx: usize, size: usize },

    #[error("coordinate {value} at position {position} is not below p = {p}")]
    BadCoordinate { position: usize, value: u32, p: u32 },

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("pair ({x}, {y}) is not composable: beta(x) = {beta_x}, alpha(y) = {alpha_y}")]
    NotComposable {
        x: usize,
        y: usize,
        beta_x: usize,
        alpha_y: usize,
    },

    #[error("multiplication table has no entry for composable pair ({0}, {1})")]
    TableIncomplete(usize, usize),

    #[error("multiplication table has an entry for non-composable pair ({0}, {1})")]
    TableExtraneous(usize, usize),

    #[error("ambient result escapes the pullback: {0}")]
    AmbientEscape(String),

    #[error("isotropy set at {unit} is not a group ({reason}): witness {witness:?}")]
    NotAGroup {
        unit: usize,
        reason: String,
        witness: Vec<usize>,
    },

    #[error("conjugation by {x} is not an isomorphism ({reason}): witness {witness:?}")]
    NotAnIsomorphism {
        x: usize,
        reason: String,
        witness: Vec<usize>,
    },

    #[error("not a morphism: law {law_id} fails at {witness}")]
    NotAMorphism { law_id: String, witness: Witness },

    #[error("factorization output escapes the induced groupoid: {0}")]
    EncodingFailure(String),

    #[error("witness for law {0} does not reproduce its violation")]
    WitnessNotReproduced(String),
}
