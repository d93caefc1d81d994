//! Matrix types: monomial matrices with root-of-unity entries, dense
//! matrices over `Q(ζ_m)`, the generators of `G(p, q, A)` and word
//! normalization.

mod dense;
mod io;
mod monomial;
mod word;

pub use dense::DenseMatrix;
pub use io::{read_generators, Matrix};
pub use monomial::{commutator_rank_monomial, MonomialMatrix};
pub use word::{factor_shift, is_prime, make_gpqa_generators, normalize_word, Generator, GroupWord};
