use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("prime {0} is too small (need p >= 5)")]
    PrimeTooSmall(u64),
    #[error("{0} is not a prime of the form 6n+1 or 6n-1")]
    PrimeNotSixNPlusMinusOne(u64),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("class functions belong to different tables")]
    TableMismatch,
    #[error("not a character: {0}")]
    NotACharacter(String),
    #[error("non-integral eigenvalue multiplicity for irrep {irrep} at class {class}")]
    NonIntegralMultiplicity { irrep: usize, class: usize },
    #[error("non-integral series coefficient at degree {0}")]
    NonIntegralCoefficient(usize),
    #[error("independent routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("series is not expandable: denominator constant term must be +-1")]
    NotExpandable,
    #[error("unknown irrep label {0}")]
    UnknownLabel(String),
    #[error("signature {0:?} is not hyperbolic")]
    NotHyperbolic(Vec<u64>),
    #[error("canonical exponent is not an integer for signature {0:?}")]
    NonIntegralCanonicalExponent(Vec<u64>),
    #[error("genus is not an integer")]
    NonIntegralGenus,
    #[error("degree {deg} is below the canonical range (2g-2 = {canonical})")]
    BelowCanonicalRange { deg: i64, canonical: i64 },
    #[error("ramification indices {0:?} are not pairwise coprime")]
    NotPerfect(Vec<u64>),
    #[error("central extension constant b is not an integer")]
    NonIntegralB,
    #[error("census mismatch at p = {p}: {detail}")]
    CensusMismatch { p: u64, detail: String },
    #[error("angle out of range (0, pi): {0}")]
    AngleOutOfRange(String),
    #[error("no exponent solves the congruences for p = {p}, k = {k}")]
    NoSolution { p: u64, k: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("matrix has odd dimension")]
    OddDimension,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("fixture missing: {0}")]
    FixtureMissing(String),
    #[error("fixture parse error: {0}")]
    FixtureParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
