use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Variants that carry structured data (witness indices, residue classes,
/// precision levels) are the ones surfaced through the CLI as JSON fields.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("division by zero polynomial")]
    ZeroPolyDivision,

    #[error("inexact polynomial division: nonzero remainder")]
    InexactDivision,

    #[error("denominator vanishes at z = 0")]
    DenominatorVanishesAtZero,

    #[error("bound too small: {0}")]
    BoundTooSmall(String),

    #[error("hypothesis violated: nonzero coefficient at prime index {witness}")]
    HypothesisViolated { witness: u64 },

    #[error(
        "support class {class} (mod {modulus}) has infinite support but is coprime to the \
         modulus; no prime witness at or below {bound}, so the prime bound may be too small"
    )]
    CoprimeSupportClass {
        class: u64,
        modulus: u64,
        bound: u64,
    },

    #[error("precision exhausted at {bits} bits while {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("search cap {cap} exceeded while {what}")]
    SearchCapExceeded { cap: u64, what: String },

    #[error("candidate not refuted: {0}")]
    NotRefuted(String),

    #[error("gamma is zero up to inversion depth {0}")]
    GammaZero(u64),

    #[error("zero cannot be protected")]
    ZeroProtected,

    #[error("prime {p} cannot reduce this data: it divides {what}")]
    BadReduction { p: u64, what: String },

    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
