use thiserror::Error;

/// Crate-wide error type. Verdict-style checks never use this: they return
/// report structs carrying their witnesses.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("ambient rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operation on the empty polyhedron")]
    EmptyPolyhedron,
    #[error("face is unbounded: functional not in the dual of the tail cone")]
    FaceUnbounded,
    #[error("rank budget exceeded: {op} supports rank <= {budget}, got {got}")]
    RankBudgetExceeded {
        op: &'static str,
        budget: usize,
        got: usize,
    },
    #[error("cone is not pointed")]
    NonPointed,
    #[error("unsupported base variety for this operation")]
    UnsupportedBase,
    #[error("pairing <m, v> is not integral")]
    NonIntegralPairing,
    #[error("functional lies outside the dual of the tail cone")]
    OutsideDualCone,
    #[error("function is not a section of the evaluated divisor")]
    NotASection,
    #[error("lattice map does not carry the tail cone into the target tail")]
    TailViolation,
    #[error("morphisms cannot be chained: {0}")]
    ChainMismatch(String),
    #[error("base varieties do not match")]
    BaseMismatch,
    #[error("point lies outside the locus")]
    OutsideLocus,
    #[error("locus is empty: degenerate polyhedral divisor rejected")]
    EmptyLocus,
    #[error("no face certificate found for pair ({sub}, {sup}) within bound {bound}")]
    FaceCertificateNotFound {
        sub: String,
        sup: String,
        bound: u32,
    },
    #[error("not a fan: cones {0} and {1} do not intersect in a common face")]
    NotAFan(String, String),
    #[error("size budget exceeded: {0}")]
    SizeBudgetExceeded(String),
    #[error("not a group homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
