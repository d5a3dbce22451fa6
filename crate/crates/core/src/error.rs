use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("letter sign must be 1 or -1, got {0}")]
    BadSign(i64),

    #[error("ambient mismatch: {0}")]
    Mismatch(String),

    #[error("series constant term must be 1")]
    NonUnitConstant,

    #[error("substitution image for variable {0} has a nonzero constant term")]
    NonzeroConstant(usize),

    #[error("monomial of degree {degree} exceeds truncation degree {max}")]
    DegreeTooHigh { degree: usize, max: usize },

    #[error("truncation degree must be at least 1")]
    ZeroDegree,

    #[error("sequence must be nonempty")]
    EmptySequence,

    #[error("cannot parse sequence {0:?}")]
    BadSequence(String),

    #[error("expected {expected} longitudes, got {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("longitude {component} is not framing-normalized (exponent sum of generator {generator} is {sum})")]
    Framing { component: usize, generator: usize, sum: i64 },

    #[error("Milnor numbers of length <= {k} do not all vanish (first nonzero: {witness} = {value})")]
    VanishingFailed { k: usize, witness: String, value: String },

    #[error("asymmetric linking data: mu({p}{q}) = {pq} but mu({q}{p}) = {qp}")]
    AsymmetricLinking { p: usize, q: usize, pq: String, qp: String },

    #[error("fixed-point iteration did not converge within {0} rounds")]
    NonConvergence(usize),

    #[error("missing Milnor number for sequence {0}")]
    MissingMu(String),

    #[error("no non-repeated sequences of length {length} avoid {j} when n = {n}")]
    EmptyBasis { n: usize, j: usize, length: usize },

    #[error("series is not the Magnus image of a group element: {0}")]
    NotGroupLike(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
