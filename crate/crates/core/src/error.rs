use thiserror::Error;

/// Errors raised by the exact algebra, the generators and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: Q(w_{0}) vs Q(w_{1})")]
    ModulusMismatch(u32, u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent not representable: {0}")]
    Denominator(String),
    #[error("unsupported rank r = {0}")]
    UnsupportedRank(u32),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("size budget exceeded: need {needed} enumerations, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("series outside the basis span: {0}")]
    NotInSpan(String),
    #[error("evaluation does not converge: {0}")]
    Convergence(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
