use thiserror::Error;

/// Errors raised by the library.
///
/// Input errors, resource errors (cap exceeded) and precondition violations
/// are kept distinct so the command-line front end can map them onto exit
/// codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid root-of-unity order {0}")]
    InvalidOrder(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("diagonal exponent vector {0:?} is scalar")]
    ScalarDiagonal(Vec<u32>),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("group enumeration exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
