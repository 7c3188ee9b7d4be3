use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },
    #[error("denominator {denominator} shares a factor with modulus {modulus}")]
    DenominatorNotCoprime {
        denominator: String,
        modulus: String,
    },
    #[error("CRT moduli are not pairwise coprime")]
    ModuliNotCoprime,
    #[error("CRT input is empty")]
    EmptyCrt,
    #[error("invalid Dedekind parameters: {0}")]
    InvalidParams(String),
    #[error("p^2 s(p-3, {h}, {p}) = {value} is not an integer")]
    NotIntegral { p: u64, h: i64, value: String },
    #[error("{0} is outside the supported scale")]
    UnsupportedScale(String),
    #[error("k = {0} is too small; k >= 2 is required")]
    KTooSmall(u64),
    #[error("{g} is not a primitive root modulo {p}^2")]
    NotPrimitiveRoot { g: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is outside the supported range (prime p >= 5)")]
    PrimeTooSmall(u64),
    #[error(
        "rounding failed: max deviation {deviation:e}, max |Im| {imag:e}, tolerance {tolerance:e}"
    )]
    RoundingFailure {
        deviation: f64,
        imag: f64,
        tolerance: f64,
    },
    #[error("gcd(r+1, k) = gcd(r+1, phi(k)) = 1 fails for r = {r}, k = {k}; W(r,k,x) need not have integer coefficients")]
    IntegralityConditionUnmet { r: u64, k: u64 },
    #[error("theorem violated: {0}")]
    TheoremViolation(String),
    #[error("a = {a} does not satisfy -2a = 1 (mod {p})")]
    InvalidA { a: i64, p: u64 },
    #[error("{value} is divisible by {p}")]
    NotCoprime { value: i64, p: u64 },
    #[error("polynomial reduces to a constant modulo {0}")]
    DegenerateReduction(u64),
    #[error("L({0}, 0) = 0, valuation undefined")]
    ZeroConstant(u64),
    #[error("invalid precision configuration: {0}")]
    InvalidPrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
