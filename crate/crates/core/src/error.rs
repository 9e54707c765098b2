use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no squarefree decomposition")]
    ZeroInput,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("form is imprimitive at {0}")]
    Imprimitive(u64),
    #[error("form has zero discriminant")]
    DegenerateForm,
    #[error("reduction of wrong type at {0}: rank below 2")]
    UnsupportedReduction(u64),
    #[error("singular quadratic form")]
    SingularForm,
    #[error("form is not maximal at {0}")]
    NotMaximal(u64),
    #[error("oracle bound exceeded: p = {p} > {bound}")]
    OracleBound { p: u64, bound: u64 },
    #[error("unlisted case: {0}")]
    UnlistedCase(String),
    #[error("pair is not normalized: {0}")]
    NotNormalized(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("splitting type does not match the discriminant sign")]
    TypeMismatch,
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("empty region: {0}")]
    EmptyRegion(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("range too large: {0}")]
    RangeTooLarge(String),
    #[error("inconsistent parity: {0}")]
    InconsistentParity(String),
    #[error("resolvent is not integral")]
    NonIntegralResolvent,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
