use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field order {p}^{r} exceeds the bound {bound}")]
    FieldTooLarge { p: u64, r: u32, bound: u64 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined for a constant polynomial")]
    ConstantPolynomial,
    #[error("zero has no inverse or multiplicative order")]
    ZeroElement,
    #[error("q = {0} is not congruent to 1 mod 3")]
    QNotOneModThree(u64),
    #[error("t = 0 is a double root of f (b = c = 0)")]
    DoubleRootAtZero,
    #[error("x*f(x) is a cube, the Kummer extension is trivial")]
    TrivialKummer,
    /// An internal consistency check failed; this is a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Diagnostic(String),
    #[error("compute budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("wild ramification index {index} in characteristic {characteristic}")]
    WildIndex { index: u32, characteristic: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
