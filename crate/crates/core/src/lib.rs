pub mod corpus;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod matgroup;
pub mod reducibility;

pub use cyclotomic::{CycNum, RootOrder};
pub use error::{Error, Result};
pub use matgroup::{DenseMatrix, MonomialMatrix};
