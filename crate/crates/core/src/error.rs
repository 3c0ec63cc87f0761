//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    BadModulusDegree { expected: u32, got: usize },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("field order {0} exceeds the supported limit 2^31")]
    FieldTooLarge(u128),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("element {value} is not a valid encoding in GF({q})")]
    BadElement { value: u64, q: u64 },
    #[error("incompatible field orders: {big} is not {small}^h for any h > 1 matching the request")]
    IncompatibleOrders { big: u64, small: u64 },
    #[error("basis is not linearly independent over the subfield")]
    DependentBasis,
    #[error("space with {points} points exceeds the index budget 2^40")]
    SpaceTooLarge { points: u128 },
    #[error("zero matrix: the empty subspace is not representable")]
    ZeroSubspace,
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("element index {index} out of range for a set of {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("quotient requires k >= 3, got k = {0}")]
    QuotientNeedsK3(u32),
    #[error("quotient image of element {index} is empty (it lies inside the quotient element)")]
    QuotientCollapse { index: usize },
    #[error("subspace is not skew to element {index} of the set")]
    NotSkew { index: usize },
    #[error("column {index} of the generator is zero: no subspace is spanned")]
    ZeroColumn { index: usize },
    #[error("element {index} has projective dimension {dim}, expected exactly {expected}")]
    DeficientElement { index: usize, dim: i64, expected: i64 },
    #[error("generator does not have full GF(q)-rank: rank {rank} < {expected}")]
    DeficientRank { rank: usize, expected: usize },
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("unsupported (k, s) pair for a closed-form secant count: k={k}, s={s}")]
    UnsupportedSecantForm { k: u32, s: String },
    #[error("k=5 closed forms require t = q^h + 2, got t = {t} with q^h = {qh}")]
    K5WrongT { t: u64, qh: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("construction self-check failed: {0}")]
    SelfCheckFailed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
