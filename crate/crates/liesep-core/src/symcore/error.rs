use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("order of the zero polynomial is undefined")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("log argument `{0}` is not positive at the evaluation point")]
    LogDomain(String),
    #[error("log argument `{0}` is constant")]
    ConstantLogArgument(String),
    #[error("log arguments `{0}` and `{1}` are not coprime")]
    NonCoprimeLogArguments(String, String),
    #[error("point does not cover variable `{0}`")]
    MissingCoordinate(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("expected a polynomial, got a proper rational function `{0}`")]
    NotPolynomial(String),
    #[error("exponent out of range")]
    Exponent,
}

pub type SymResult<T> = Result<T, SymError>;
