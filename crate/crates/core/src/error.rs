use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0}")]
    Conductor(String),
    #[error("galois parameter {k} is not a unit modulo {conductor}")]
    Galois { k: i64, conductor: u32 },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("closure exceeded the element cap of {0}")]
    ElementCap(usize),
    #[error("not a polynomial invariant ring: {0}")]
    NotPolynomial(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("spectrum: {0}")]
    Spectrum(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("bad group data: {0}")]
    Data(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
