use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("key endpoint a0 or an is zero")]
    ZeroEndpoint,
    #[error("all key entries are zero")]
    ZeroTuple,
    #[error("key needs at least two entries, got {0}")]
    KeyTooShort(usize),
    #[error("affine substitution with zero scale")]
    ZeroScale,
    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
    #[error("prime {0} divides the discriminant or the leading coefficient")]
    BadPrime(u64),
    #[error("no usable prime below {0}")]
    NoUsablePrimes(u64),
    #[error("no transitive subgroup of S{degree} admits the observed cycle types")]
    Inconsistent { degree: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("discriminant is zero")]
    ZeroDiscriminant,
    #[error("could not certify resolvent coefficients below {0} bits")]
    PrecisionExhausted(u32),
    #[error("Berwick relations violated: {0}")]
    BerwickInconsistent(String),
    #[error("degree {0} outside the supported range")]
    OutOfRange(usize),
    #[error("polynomial is reducible over the rationals")]
    Reducible,
    #[error("records of more than one degree")]
    MixedDegrees,
    #[error("expected degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degenerate dataset: {0}")]
    DegenerateDataset(String),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
