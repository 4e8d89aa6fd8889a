use thiserror::Error;

/// Errors raised by ring construction, module algebra and the LRPC codec.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("ring is not local: {0}")]
    NotLocal(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("operands belong to different extensions")]
    ExtensionMismatch,
    #[error("submodules live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("module is not free")]
    NotFree,
    #[error("requested rank {rank} exceeds the ambient dimension {ambient}")]
    BadRank { rank: usize, ambient: usize },
    #[error("1 is not an element of the module")]
    OneNotInModule,
    #[error("module has no suitable basis")]
    NoSuitableBasis,
    #[error("element does not lie in the span of the small support module")]
    NotInF,
    #[error("parity-check matrix has no invertible (n-k)x(n-k) minor")]
    NoInvertibleMinor,
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("code generation failed: {0}")]
    GenerationFailed(String),
    #[error("syndrome is not expressible over the candidate support")]
    NoSolution,
    #[error("erasure decoding precondition violated: {0}")]
    RankDeficient(String),
    #[error("bound hypotheses violated: {0}")]
    HypothesisViolated(String),
    #[error("index {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error at column {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("invalid serialized code: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
