use serde::Serialize;

use crate::cyclotomic::{CycNum, RootOrder};
use crate::engine::{compute_invariants_generic, FiniteGroup, GroupElement};
use crate::error::{Error, Result};
use crate::matgroup::DenseMatrix;
use crate::reducibility::algebra::eigenspace;
use crate::reducibility::lemma::restriction_abelian;
use crate::reducibility::subspace::{Echelon, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionStatus {
    /// `1 ≤ dim M ≤ 3`, block-diagonal, abelian on `M^⊥`.
    Verified,
    /// No admissible `M` exists.
    Violation,
}

/// A splitting `C^n = M ⊕ M^⊥` with the group abelian on `M^⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub status: DecompositionStatus,
    pub m: Subspace,
    pub dim: usize,
    pub blocks_verified: bool,
    pub complement_abelian: bool,
    pub abelian_group: bool,
    pub max_commutator_rank: usize,
    /// Order of the root of unity adjoined for the computation.
    pub field_order: u32,
    pub violation: Option<String>,
}

/// Smallest `k ≥ 1` with `g^k = I`.
fn element_order(g: &DenseMatrix, limit: usize) -> Result<usize> {
    let mut acc = g.clone();
    for k in 1..=limit {
        if acc.is_identity() {
            return Ok(k);
        }
        acc = acc.mul(g)?;
    }
    Err(Error::precondition(
        "generator does not have finite order within the group order",
    ))
}

/// Span of a common eigenvector of commuting matrices of finite order.
/// Eigenvalues are roots of unity of order dividing each element's order;
/// at each step the eigenspace with the earliest pivot is kept.
fn common_eigenvector(
    gens: &[DenseMatrix],
    n: usize,
    order: RootOrder,
    group_order: usize,
) -> Result<(Subspace, RootOrder)> {
    let mut field = order;
    let mut orders = Vec::new();
    for g in gens {
        let e = element_order(g, group_order)?;
        field = field.lcm(RootOrder::new(e as u32)?)?;
        orders.push(e);
    }
    let mut v = Subspace::full(n, field);
    for (g, &e) in gens.iter().zip(&orders) {
        let g = g.lift(field)?;
        let eo = RootOrder::new(e as u32)?;
        let mut best: Option<Subspace> = None;
        for k in 0..e as i64 {
            let lam = CycNum::root_of_unity(k, eo);
            let s = eigenspace(&g, &lam)?.intersect(&v)?;
            if s.dim() > 0
                && best
                    .as_ref()
                    .is_none_or(|b| (s.pivots()[0], s.dim()) < (b.pivots()[0], b.dim()))
            {
                best = Some(s);
            }
        }
        v = best.ok_or_else(|| Error::precondition("no eigenvalue found among roots of unity"))?;
    }
    let line = Subspace::span(n, &v.basis()[..1], field)?;
    Ok((line, field))
}

/// Span of the ranges of `K - I` over all distinct commutators `K`.
///
/// This subspace is invariant (conjugates of commutators are commutators),
/// and for unitary groups commutators fix its orthocomplement pointwise, so
/// the group is abelian there. Conversely any `M` whose complement carries
/// an abelian action contains it. It is therefore the smallest admissible
/// `M`, and if its dimension exceeds 3 no admissible `M` exists.
pub fn commutator_range<E: GroupElement>(g: &FiniteGroup<E>) -> Result<Subspace> {
    let t = g.cayley_table();
    let len = g.order();
    let mut seen = vec![false; len];
    for i in 0..len {
        for j in 0..len {
            seen[t.commutator(i, j)] = true;
        }
    }
    let n = g.dim();
    let mut order = RootOrder::ONE;
    let mut ech = Echelon::new(n);
    let mut cols = Vec::new();
    for (k, x) in g.elements().iter().enumerate() {
        if !seen[k] || k == 0 {
            continue;
        }
        let d = x.to_dense();
        order = order.lcm(d.order())?;
        let km = d.sub(&DenseMatrix::identity(n, d.order()))?;
        for j in 0..n {
            let col: Vec<CycNum> = (0..n).map(|i| km.get(i, j).lift(order)).collect::<Result<_>>()?;
            if ech.rank() < n && ech.insert(col.clone()) {
                cols.push(col);
            }
        }
    }
    Subspace::span(n, &cols, order)
}

/// Decomposes a finite group with all commutator ranks at most 2 as
/// `G ⊆ G₁ ⊕ G₂` along `M ⊕ M^⊥` with `1 ≤ dim M ≤ 3` and `G₂` abelian.
pub fn decompose_rank2_group<E: GroupElement>(g: &FiniteGroup<E>) -> Result<DecompositionReport> {
    let inv = compute_invariants_generic(g);
    if inv.r > 2 {
        return Err(Error::precondition(format!("maximal commutator rank is {} > 2", inv.r)));
    }
    let n = g.dim();
    let gens: Vec<DenseMatrix> = g.generators().iter().map(GroupElement::to_dense).collect();
    let order = gens.iter().try_fold(RootOrder::ONE, |o, x| o.lcm(x.order()))?;
    let (m, field) = if inv.abelian {
        common_eigenvector(&gens, n, order, g.order())?
    } else {
        (commutator_range(g)?, order)
    };
    let gens: Vec<DenseMatrix> = gens.iter().map(|x| x.lift(field)).collect::<Result<_>>()?;
    let m = m.lift(field)?;
    let comp = m.orthocomplement();
    let blocks_verified = gens.iter().all(|x| m.is_invariant(x) && comp.is_invariant(x));
    let complement_abelian = blocks_verified && restriction_abelian(&gens, &comp)?;
    let dim = m.dim();
    let violation = if !(1..=3).contains(&dim) {
        Some(format!(
            "commutator range has dimension {dim}; every admissible M contains it"
        ))
    } else if !blocks_verified {
        Some("orthocomplement is not invariant; group is not unitary".to_string())
    } else if !complement_abelian {
        Some("restriction to the orthocomplement is not abelian".to_string())
    } else {
        None
    };
    Ok(DecompositionReport {
        status: if violation.is_none() {
            DecompositionStatus::Verified
        } else {
            DecompositionStatus::Violation
        },
        m,
        dim,
        blocks_verified,
        complement_abelian,
        abelian_group: inv.abelian,
        max_commutator_rank: inv.r,
        field_order: field.get(),
        violation,
    })
}
