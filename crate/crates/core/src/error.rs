use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("divisor is not monic")]
    NotMonic,
    #[error("divisor must have degree at least 1")]
    ConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("factor 1 - q^0 vanishes")]
    ZeroFactor,
    #[error("denominator factor vanishes at index {index}")]
    VanishingDenominator { index: u64 },
    #[error("divisor has zero constant term but the operand has negative offset {offset}")]
    NonUnitOffset { offset: i64 },
    #[error("q -> 1 limit is singular: {0}")]
    SingularLimit(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
