//! The crate-wide error type.
//!
//! Every failure carries a stable machine-readable kind (see [`Error::kind`])
//! so that the command-line front end can report a closed set of error codes.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The modulus is outside the supported range `2^a * q`, `a <= 7`,
    /// `q in {1, 3, 5, 7, 9, 13, 25}`.
    #[error("unsupported modulus {0}: expected 2^a*q with 0<=a<=7 and q in {{1,3,5,7,9,13,25}}")]
    UnsupportedModulus(u64),

    /// Two operands live over different moduli.
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    /// A matrix that had to be invertible is not.
    #[error("matrix {0} is not invertible")]
    NotInvertible(String),

    /// A residue that had to be a unit is not.
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: i64, modulus: u32 },

    /// CRT inputs whose moduli share a factor.
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u32, u32),

    /// A reduction target that does not divide the source modulus.
    #[error("{target} does not divide {modulus}")]
    NotDivisor { target: u32, modulus: u32 },

    /// An operation restricted to 2-power moduli received another modulus.
    #[error("modulus {0} is not a power of 2")]
    NotTwoPower(u32),

    /// Exponent arguments outside their documented range.
    #[error("exponents out of range: {0}")]
    ExponentRange(String),

    /// An enumeration grew past its element cap.
    #[error("element cap {cap} exceeded (enumerated {partial} elements so far)")]
    CapExceeded { cap: usize, partial: usize },

    /// The exhaustive conjugacy search would scan too many candidates.
    #[error("conjugacy search at modulus {0} exceeds the exhaustive-search size cap")]
    SearchTooLarge(u32),

    /// A twist operation that requires -Id in the group.
    #[error("group does not contain -Id")]
    MissingMinusId,

    /// An isogeny step whose kernel order exceeds the level of the source.
    #[error("kernel larger than level permits (r = {r}, level exponent m = {m})")]
    KernelTooLarge { r: u32, m: u32 },

    /// An isogeny step whose kernel is not stable under the group.
    #[error("kernel subgroup generated by ({0}, {1}) is not stable under the group")]
    NotStable(u32, u32),

    /// A kernel generator that does not generate a cyclic subgroup of the stated order.
    #[error("vector ({0}, {1}) does not generate a cyclic subgroup of order 2^{2}")]
    BadKernel(u32, u32, u32),

    /// Violation of an internal invariant guaranteed by the theory; always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Label invariants need a surjective determinant.
    #[error("determinant map is not surjective onto (Z/{0}Z)^*")]
    DetNotSurjective(u32),

    /// Graph construction found more vertices than the Kenku bound allows.
    #[error("isogeny graph would have {0} vertices (at most 8 allowed)")]
    TooManyVertices(usize),

    /// A count vector violating Kenku's constraints; `items` lists the
    /// violated constraint numbers (0 for the bound table and `C <= 8`).
    #[error("Kenku constraint violated: {detail}")]
    Kenku { items: Vec<u8>, detail: String },

    /// A count vector or subgroup lattice satisfying Kenku's constraints that
    /// still matches none of the 26 graph types.
    #[error("inadmissible graph shape: {0}")]
    Inadmissible(String),

    /// Malformed textual input, optionally at a line number.
    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    /// A catalog name that appears twice.
    #[error("duplicate catalog name {0:?}")]
    DuplicateName(String),

    /// A catalog name that cannot be resolved.
    #[error("unknown group name {0:?}")]
    UnknownName(String),

    /// File system failure.
    #[error("i/o error: {0}")]
    Io(String),

    /// Invalid command-line or fixture usage.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedModulus(_) => "unsupported-modulus",
            Error::ModulusMismatch { .. } => "modulus-mismatch",
            Error::NotInvertible(_) => "not-invertible",
            Error::NonUnit { .. } => "non-unit",
            Error::NotCoprime(..) => "not-coprime",
            Error::NotDivisor { .. } => "not-divisor",
            Error::NotTwoPower(_) => "not-two-power",
            Error::ExponentRange(_) => "exponent-range",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::SearchTooLarge(_) => "search-too-large",
            Error::MissingMinusId => "missing-minus-id",
            Error::KernelTooLarge { .. } => "kernel-too-large",
            Error::NotStable(..) => "not-stable",
            Error::BadKernel(..) => "bad-kernel",
            Error::Internal(_) => "internal",
            Error::DetNotSurjective(_) => "det-not-surjective",
            Error::TooManyVertices(_) => "too-many-vertices",
            Error::Kenku { .. } => "kenku-violation",
            Error::Inadmissible(_) => "inadmissible-shape",
            Error::Parse { .. } => "parse",
            Error::DuplicateName(_) => "duplicate-name",
            Error::UnknownName(_) => "unknown-name",
            Error::Io(_) => "io",
            Error::Invalid(_) => "invalid-input",
        }
    }

    /// Every kind [`Error::kind`] can return, in documentation order.
    pub const KINDS: &'static [&'static str] = &[
        "unsupported-modulus",
        "modulus-mismatch",
        "not-invertible",
        "non-unit",
        "not-coprime",
        "not-divisor",
        "not-two-power",
        "exponent-range",
        "cap-exceeded",
        "search-too-large",
        "missing-minus-id",
        "kernel-too-large",
        "not-stable",
        "bad-kernel",
        "internal",
        "det-not-surjective",
        "too-many-vertices",
        "kenku-violation",
        "inadmissible-shape",
        "parse",
        "duplicate-name",
        "unknown-name",
        "io",
        "invalid-input",
    ];
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
