//! Exact reducibility tools: subspaces, algebra spans and commutants,
//! invariant-subspace search, stabilizers, the shifted invariant subspace
//! and the rank-2 decomposition.

mod algebra;
mod decompose;
mod lemma;
mod subspace;

pub use algebra::{
    algebra_span, commutant, cyclic_subspace, eigenspace, find_invariant_subspace, is_irreducible, AlgebraSpan,
    InvariantSubspace,
};
pub use decompose::{commutator_range, decompose_rank2_group, DecompositionReport, DecompositionStatus};
pub use lemma::{
    check_stabilizer_dichotomy, off_block_rank, restriction_abelian, shifted_invariant_subspace, stabilizer_subgroup,
    DichotomyReport, ShiftBranch,
};
pub use subspace::{unit_vector, Subspace};
