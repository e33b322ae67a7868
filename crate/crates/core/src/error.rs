use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at q = {at} while evaluating {value}")]
    Pole { at: String, value: String },
    #[error("zero index not allowed for {0}")]
    ZeroIndex(&'static str),
    #[error("series window error: {0}")]
    Window(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator {0} is outside the domain of this representation")]
    OutsideDomain(String),
    #[error("argument outside the Borel half: {0}")]
    OutsideBorel(String),
    #[error("Cartan factor not computable: {0}")]
    Kappa(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
