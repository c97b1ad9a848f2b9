use thiserror::Error;

use crate::field::Level;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("q = {0} is too small; the construction needs q > 2")]
    QTooSmall(u64),
    #[error("parameters out of supported range: {0}")]
    Unsupported(String),
    #[error("level mismatch: {from:?} has no subfield level {to:?}")]
    LevelMismatch { from: Level, to: Level },
    #[error("element is not a square")]
    NotASquare,
    #[error("no solution to t^{exponent} = c")]
    NoSolution { exponent: u64 },
    #[error("norm of the element over F_q is not 1")]
    NormNotOne,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("points must be pairwise distinct")]
    DuplicatePoint,
    #[error("omega must be nonzero")]
    ZeroOmega,
    #[error("invalid alpha: {0}")]
    BadAlpha(String),
    #[error("omega is excluded: {0}")]
    BadOmega(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("point lies in the cap")]
    PointInCap,
    #[error("D-matrix needs k >= 3, got {0}")]
    KTooSmall(usize),
    #[error("norm condition N(a0) + N(a2) = 0 fails")]
    NormConditionFails,
    #[error("Veronese parameters must be nonzero")]
    ZeroAlpha,
    #[error("operation restricted to n = 1")]
    NOnlyOne,
    #[error("point lies in the projection center")]
    ZeroPair,
    #[error("input too small: {0}")]
    TooSmall(String),
    #[error("space of size {size} exceeds the bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("construction degree must be odd (2n + 1), got {0}")]
    EvenDegree(u32),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
