use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasError {
    #[error("scalar kind mismatch: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("odd factor inside {0}")]
    OddInFunction(&'static str),
    #[error("non-integer power of an odd expression")]
    OddPower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("fractional power of a negative number")]
    NegativeBase,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression outside the symbolic tier: {0}")]
    Tier(String),
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("no solved form for `{0}`")]
    NotEvolutionary(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
