use thiserror::Error;

/// Errors shared by every module of the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown function id `{0}`")]
    UnknownFunction(String),
    #[error("bad parameter for `{id}`: {reason}")]
    BadParam { id: String, reason: String },
    #[error("nodes {i} and {j} collide (gap below the separation guard)")]
    DuplicateNodes { i: usize, j: usize },
    #[error("evaluation point {x} exceeds the domain hint upper bound {upper}")]
    DomainExceeded { x: f64, upper: f64 },
    #[error("degenerate interval [{a}, {b}]")]
    DegenerateInterval { a: f64, b: f64 },
    #[error("shift slope {alpha} is below the admissible bound {bound}")]
    SlopeTooSmall { alpha: f64, bound: f64 },
    #[error("audited shape contradicts the declared flag `{flag}`")]
    AuditMismatch { flag: &'static str },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("string sizes out of order: need 2 <= m <= n, got n={n}, m={m}")]
    SizeOrder { n: usize, m: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("string of length {n} too large for the exhaustive oracle (max {max})")]
    TooLarge { n: usize, max: usize },
    #[error("exponent p={0} out of range for this operation")]
    BadP(f64),
    #[error("alpha={0} out of range for this operation")]
    BadAlpha(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation requires an inner-product space, got {0}")]
    NotInnerProduct(String),
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {delta}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue})")]
    NotPsd { eigenvalue: f64 },
    #[error("determinant {0} is negative beyond the clipping band")]
    NegativeDeterminant(f64),
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("operand coordinate {index} = {value} lies outside the positive cone")]
    NotInPositiveCone { index: usize, value: f64 },
    #[error("hypothesis `{0}` failed its audit")]
    HypothesisFailed(String),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("bad space spec `{spec}`: {reason}")]
    BadSpaceSpec { spec: String, reason: String },
    #[error("singular value decomposition did not converge for a {rows}x{cols} matrix")]
    SvdFailure { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
