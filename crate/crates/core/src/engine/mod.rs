//! Group enumeration, the diagonal and commutator subgroups, and the
//! commutator-rank invariants `ρ` and `r`.

mod group;
mod invariants;
mod rho2;

pub use group::{CayleyTable, DenseGroup, FiniteGroup, GroupElement, GroupSet, DEFAULT_CAP};
pub use invariants::{
    commutator_rank, commutator_subgroup, commutator_subgroup_exhaustive, compute_invariants,
    compute_invariants_generic, diagonal_subgroup, InvariantsReport,
};
pub use rho2::{rho2_witness, Rho2Witness};
