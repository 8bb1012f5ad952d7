use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid cyclotomic level {0}")]
    InvalidLevel(u64),
    #[error("level mismatch: {left} and {right} have no embedding relation")]
    LevelMismatch { left: u64, right: u64 },
    #[error("malformed element: {0}")]
    Malformed(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not integral")]
    NotIntegral,
    #[error("{0} is not a root of unity in the target field")]
    NotRootOfUnity(String),
    #[error("no square root of the normalisation constant in Q(zeta_{level}) for p = {p}")]
    NoSquareRoot { p: u32, level: u64 },
    #[error("unsupported theory index {0}")]
    UnsupportedTheory(u32),
    #[error("color {color} outside the evaluable range 0..={max}")]
    ColorOutOfRange { color: u32, max: u32 },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("boundary {boundary} is not supported by theory p = {p}")]
    IncompatibleBoundary { boundary: String, p: u32 },
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}
