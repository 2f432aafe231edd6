use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid prime power: {0}")]
    InvalidPrimePower(String),
    #[error("characteristic {0} exceeds the supported bound 2^16")]
    CharacteristicTooLarge(u64),
    #[error("extension too large: GF({p}^{degree}) exceeds {cap} bits")]
    ExtensionTooLarge { p: u64, degree: u32, cap: u32 },
    #[error("field of order {0} is too large for table arithmetic")]
    TableFieldTooLarge(u64),
    #[error("F_U undefined at zero")]
    FrobeniusAtZero,
    #[error("operation requires a quadratic extension context")]
    NotQuadratic,
    #[error("element encoding does not belong to this field")]
    BadElement,

    #[error("enumeration bound too large: {0}")]
    EnumerationBound(String),
    #[error("tilde undefined: zero constant term")]
    ZeroConstant,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not a product of U-irreducible polynomials")]
    NotUFactorable,
    #[error("polynomial is not U-irreducible")]
    NotUIrreducible,
    #[error("coefficients are not in the base field GF(q)")]
    NotOverBaseField,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid class datum: {0}")]
    InvalidDatum(String),
    #[error("class datum is not real")]
    NotReal,
    #[error("negation is trivial in characteristic 2")]
    NegationInCharTwo,
    #[error("operation requires odd q")]
    RequiresOddQ,
    #[error("operation requires even q")]
    RequiresEvenQ,
    #[error("reduction index {l} invalid for partition {partition}")]
    InvalidReduction { l: u32, partition: String },
    #[error("enumeration theorem requires odd q")]
    EnumerationNeedsOddQ,
    #[error("count mismatch at n = {n} for {which}: series {series}, direct {direct}")]
    CountMismatch {
        n: usize,
        which: &'static str,
        series: String,
        direct: String,
    },

    #[error("matrix dimensions do not match")]
    Dimension,
    #[error("matrix is singular")]
    Singular,
    #[error("form is not a nondegenerate Hermitian matrix")]
    BadForm,
    #[error("matrix is not unitary for the given form")]
    NotUnitary,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("group order mismatch after closure: got {got}, expected {expected}")]
    OrderMismatch { got: u128, expected: u128 },
    #[error("realization failed: {0}")]
    RealizationFailed(String),
    #[error("parameter constraint violated: {0}")]
    Parameter(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
