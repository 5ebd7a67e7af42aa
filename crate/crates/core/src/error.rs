use num_bigint::BigInt;
use thiserror::Error;

/// Every failure the workbench can report. Each variant maps to a stable
/// machine-readable `kind()` string used by the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor classes live on distinct surfaces ({left} vs {right})")]
    DistinctSurfaces { left: String, right: String },

    #[error("coefficient vector has length {found}, lattice {lattice} has rank {expected}")]
    RankMismatch {
        lattice: String,
        expected: usize,
        found: usize,
    },

    #[error("D.(D+K) = {value} is odd; the lattice violates adjunction integrality")]
    AdjunctionParity { value: BigInt },

    #[error("unknown lattice preset `{0}`")]
    UnknownPreset(String),

    #[error("operation `{operation}` is not supported on lattice `{lattice}`")]
    UnsupportedPreset { operation: String, lattice: String },

    #[error("double cover with p = 0 and l = 0 is an unramified split; genus would be negative")]
    UnramifiedSplit,

    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: String,
        value: String,
        range: String,
    },

    #[error("Weierstrass model is degenerate: discriminant vanishes identically")]
    DegenerateModel,

    #[error("deg {which} = {degree} exceeds the bound {bound}")]
    DegreeBound {
        which: String,
        degree: usize,
        bound: usize,
    },

    #[error("point does not satisfy the Weierstrass equation")]
    NotOnCurve,

    #[error("pole order of x is odd at {place}")]
    OddPoleOrder { place: String },

    #[error("intersection of a section with itself requested ({0})")]
    SelfIntersection(String),

    #[error("ramification fiber at {place} is singular")]
    SingularRamificationFiber { place: String },

    #[error("intersection with the zero section is {value}, which is odd")]
    SpecialnessParity { value: BigInt },

    #[error("{0} is not a polynomial")]
    NotPolynomial(String),

    #[error("tangency budget violated: I(alpha) = {i_alpha} but L.T = {l_dot_t}")]
    TangencyBudget { i_alpha: BigInt, l_dot_t: BigInt },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DistinctSurfaces { .. } => "distinct-surfaces",
            Error::RankMismatch { .. } => "rank-mismatch",
            Error::AdjunctionParity { .. } => "adjunction-parity",
            Error::UnknownPreset(_) => "unknown-preset",
            Error::UnsupportedPreset { .. } => "unsupported-preset",
            Error::UnramifiedSplit => "unramified-split",
            Error::OutOfRange { .. } => "out-of-range",
            Error::DegenerateModel => "degenerate-model",
            Error::DegreeBound { .. } => "degree-bound",
            Error::NotOnCurve => "not-on-curve",
            Error::OddPoleOrder { .. } => "odd-pole-order",
            Error::SelfIntersection(_) => "self-intersection",
            Error::SingularRamificationFiber { .. } => "singular-ramification-fiber",
            Error::SpecialnessParity { .. } => "specialness-parity",
            Error::NotPolynomial(_) => "not-polynomial",
            Error::TangencyBudget { .. } => "tangency-budget",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
            Error::Malformed(_) => "malformed",
        }
    }

    pub(crate) fn out_of_range(what: &str, value: impl ToString, range: &str) -> Self {
        Error::OutOfRange {
            what: what.to_string(),
            value: value.to_string(),
            range: range.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
