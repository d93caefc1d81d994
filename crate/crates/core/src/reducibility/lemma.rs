use serde::Serialize;

use crate::engine::{compute_invariants_generic, FiniteGroup, GroupElement};
use crate::error::{Error, Result};
use crate::matgroup::DenseMatrix;
use crate::reducibility::subspace::Subspace;

/// `rank W₂₁` for the block decomposition along `N ⊕ N^⊥`: the dimension
/// by which `W N` leaves `N`, i.e. `dim(N + WN) - dim N`.
pub fn off_block_rank(w: &DenseMatrix, n: &Subspace) -> Result<usize> {
    Ok(n.sum(&n.image(w)?)?.dim() - n.dim())
}

/// Which side of the containment a shifted subspace falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftBranch {
    /// `Z N ⊆ N`; the subspace is `N` itself.
    Unchanged,
    /// `N_Z ⊆ N` with `dim(N / N_Z) = 1`.
    Contained,
    /// `N ⊆ N_Z = span{N, ZN}` with `dim(N_Z / N) = 1`.
    Containing,
}

/// A `Z`-invariant subspace next to `N` for a semigroup whose elements all
/// have rank-≤1 off-diagonal block with respect to `N ⊕ N^⊥`.
///
/// When `Z N ⊄ N` the two candidates are `N₀ = {x ∈ N : Zx ∈ N}`
/// (codimension 1 in `N`) and `N₁ = N + ZN` (one dimension more); the
/// smaller one is returned if it is `Z`-invariant, else the larger.
/// Invariance is checked exactly before returning.
pub fn shifted_invariant_subspace(
    semigroup: &[DenseMatrix],
    n: &Subspace,
    z: &DenseMatrix,
) -> Result<(Subspace, ShiftBranch)> {
    for (i, w) in semigroup.iter().chain(std::iter::once(z)).enumerate() {
        let r = off_block_rank(w, n)?;
        if r > 1 {
            return Err(Error::precondition(format!(
                "element {i} has off-diagonal block of rank {r}"
            )));
        }
    }
    if n.is_invariant(z) {
        return Ok((n.clone(), ShiftBranch::Unchanged));
    }
    let n0 = n.preimage_within(z, n)?;
    if n0.is_invariant(z) {
        return Ok((n0, ShiftBranch::Contained));
    }
    let n1 = n.sum(&n.image(z)?)?;
    if n1.is_invariant(z) {
        return Ok((n1, ShiftBranch::Containing));
    }
    Err(Error::precondition("neither candidate subspace is invariant under Z"))
}

/// Elements of `G` mapping `M` into itself, as a group.
pub fn stabilizer_subgroup<E: GroupElement>(g: &FiniteGroup<E>, m: &Subspace, cap: usize) -> Result<FiniteGroup<E>> {
    let elems = g.filter(|x| m.is_invariant(&x.to_dense()));
    FiniteGroup::generated_by_subset(&elems, cap)
}

/// True iff the restrictions of all listed elements to the invariant
/// subspace `M` commute pairwise.
pub fn restriction_abelian(elements: &[DenseMatrix], m: &Subspace) -> Result<bool> {
    let restricted = elements.iter().map(|x| m.restrict(x)).collect::<Result<Vec<_>>>()?;
    for i in 0..restricted.len() {
        for j in i + 1..restricted.len() {
            if restricted[i].mul(&restricted[j])? != restricted[j].mul(&restricted[i])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the stabilizer dichotomy check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub stabilizer_order: usize,
    pub on_subspace_abelian: bool,
    pub on_complement_abelian: bool,
    /// `n ≤ 2`, where the statement holds trivially.
    pub vacuous: bool,
    pub holds: bool,
}

/// Checks that the stabilizer of `M` acts abelianly on `M` or on `M^⊥`.
/// Requires a nonabelian group with all commutator ranks at most 2.
pub fn check_stabilizer_dichotomy<E: GroupElement>(
    g: &FiniteGroup<E>,
    m: &Subspace,
    cap: usize,
) -> Result<DichotomyReport> {
    let inv = compute_invariants_generic(g);
    if inv.abelian {
        return Err(Error::precondition("group is abelian"));
    }
    if inv.r > 2 {
        return Err(Error::precondition(format!("maximal commutator rank is {} > 2", inv.r)));
    }
    let stab = stabilizer_subgroup(g, m, cap)?;
    let comp = m.orthocomplement();
    let gens: Vec<DenseMatrix> = stab.generators().iter().map(GroupElement::to_dense).collect();
    if !gens.iter().all(|x| comp.is_invariant(x)) {
        return Err(Error::precondition(
            "stabilizer does not preserve the orthocomplement; group is not unitary",
        ));
    }
    let on_m = restriction_abelian(&gens, m)?;
    let on_c = restriction_abelian(&gens, &comp)?;
    let vacuous = g.dim() <= 2;
    Ok(DichotomyReport {
        stabilizer_order: stab.order(),
        on_subspace_abelian: on_m,
        on_complement_abelian: on_c,
        vacuous,
        holds: vacuous || on_m || on_c,
    })
}
