use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ray ({0}, {1}) is not primitive")]
    NonPrimitiveRay(i64, i64),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("cone {0} is not a maximal cone")]
    NonMaximalCone(usize),
    #[error("character of the divisor on cone {0} is not integral")]
    NonIntegralCharacter(usize),
    #[error("unsupported covering degree {0}")]
    UnsupportedDegree(usize),
    #[error("N = {n} has the wrong parity for case {case}")]
    ParityMismatch { n: u32, case: &'static str },
    #[error("N = {0} is not realizable (N < 3)")]
    NotRealizable(u32),
    #[error("genericity violated: {0}")]
    GenericityViolated(String),
    #[error("sign relation violated at r = {r}, theta = {theta}")]
    SignRelationViolated { r: f64, theta: f64 },
    #[error("inadmissible polynomial: {0}")]
    InadmissiblePolynomial(String),
    #[error("expected {expected} zeros at r = {r}, found {found}")]
    WrongZeroCount { r: f64, expected: usize, found: usize },
    #[error("zero drift exponent {exponent} below bound {bound}")]
    DriftBoundViolated { exponent: f64, bound: f64 },
    #[error("rho map is not monotone at r = {r}, theta = {theta}")]
    MonotonicityFailure { r: f64, theta: f64 },
    #[error("a_d shrinking exhausted after {0} halvings")]
    ShrinkExhausted(u32),
    #[error("fan is not the standard P2 fan")]
    NotP2Fan,
    #[error("tropical gluing inconsistent: {0}")]
    GluingInconsistent(String),
    #[error("ambiguous bundle match: {0}")]
    AmbiguousMatch(String),
    #[error("nothing to render")]
    EmptySubject,
    #[error("invalid tropical data: {0}")]
    InvalidData(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
