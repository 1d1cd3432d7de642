use thiserror::Error;

/// Invalid parameters handed to a library operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("coefficient has negative valuation: {0}")]
    NegativeValuation(String),
    #[error("{0}")]
    Invalid(String),
}

/// Failures of operator arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("operators live on different charts")]
    ChartMismatch,
    #[error("not extendable to other chart: {0}")]
    NotExtendable(String),
    #[error("the zero operator has no symbol")]
    ZeroOperator,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
