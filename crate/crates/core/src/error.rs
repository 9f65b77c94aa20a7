use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

/// Failures raised by the numerical routines.
///
/// Values are carried as `f64` so the error type stays independent of the
/// working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("infinite product did not reach the truncation threshold within {max_terms} factors")]
    TruncationNotReached { max_terms: usize },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("ill-defined series: {0}")]
    IllDefined(String),

    #[error("q-derivative at zero needs an explicit f'(0)")]
    MissingDerivativeAtZero,

    #[error("non-finite integrand value at x = {x}")]
    NonFinite { x: f64 },

    #[error("degenerate characteristic vector: a and c both vanish")]
    DegenerateParameters,

    #[error("resonance in {what} at n = {n}: denominator {denominator:e} is negligible against its terms")]
    Resonance {
        what: &'static str,
        n: usize,
        denominator: f64,
    },

    #[error("zero denominator in {0}")]
    ZeroDenominator(String),

    #[error("pole of the Pearson ratio at x = {x}")]
    Pole { x: f64 },

    #[error("weight power base {base} is not positive")]
    InvalidWeightBase { base: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inadmissible weight: {0}")]
    Inadmissible(String),
}
