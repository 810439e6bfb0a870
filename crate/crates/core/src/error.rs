use num_bigint::BigInt;
use thiserror::Error;

use crate::cf::QuotientSequence;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quotient entries must be positive, got {0}")]
    NonPositiveEntry(BigInt),
    #[error("operation needs a nonempty quotient sequence")]
    EmptySequence,
    #[error("{alpha}/{beta} is not in lowest terms")]
    NotCoprime { alpha: BigInt, beta: BigInt },
    #[error("{alpha}/{beta} is out of range (need 1 <= beta <= alpha)")]
    PairOutOfRange { alpha: BigInt, beta: BigInt },
    #[error("1/1 has no even-length expansion")]
    ParityUnachievable,
    #[error("index range ({i}, {j}) is invalid for a sequence of length {len}")]
    IndexOutOfRange { i: i64, j: i64, len: usize },
    #[error(
        "Euler identity indices ({k}, {l}, {m}, {n}) are invalid for a sequence of length {len}"
    )]
    EulerIndices {
        k: i64,
        l: i64,
        m: i64,
        n: i64,
        len: usize,
    },
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("marginal asymmetry must be nonzero")]
    ZeroMarginal,
    #[error("target {0} is too large to enumerate")]
    TargetTooLarge(BigInt),
    #[error("anticontinuant 0 is attained exactly by the symmetric sequences")]
    SymmetricTarget,
    #[error("congruence exponent s must be 0 or 1, got {0}")]
    InvalidExponent(i64),
    #[error("x^2 + {n}x + 1 is the folded case; its exceptional moduli are not finite")]
    FoldedCase { n: BigInt },
    #[error("invalid folded parameters: {0}")]
    InvalidFolded(String),
    #[error("no folded pattern matches {0}")]
    FoldedPatternMismatch(QuotientSequence),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
