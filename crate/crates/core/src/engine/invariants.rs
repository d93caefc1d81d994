use rayon::prelude::*;
use serde::Serialize;

use crate::engine::group::{FiniteGroup, GroupElement, GroupSet};
use crate::error::Result;
use crate::matgroup::{commutator_rank_monomial, MonomialMatrix};

/// `ρ` and `r` of a finite group together with witnesses.
///
/// `rho` is `None` when the only diagonal element is the identity. For an
/// abelian group every commutator is trivial, so `r = 0` and `abelian` is
/// set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantsReport<E> {
    pub order: usize,
    pub rho: Option<usize>,
    pub r: usize,
    pub abelian: bool,
    pub rho_witness: Option<E>,
    pub r_witness: Option<(E, E)>,
    /// `rank_histogram[k]` counts unordered pairs `{X, Y}` of distinct
    /// elements with commutator rank `k`.
    pub rank_histogram: Vec<u64>,
}

impl<E> InvariantsReport<E> {
    /// Number of unordered pairs with commutator rank exactly 1.
    pub fn rank_one_pairs(&self) -> u64 {
        self.rank_histogram.get(1).copied().unwrap_or(0)
    }
}

/// Result of scanning one row `X = elements[i]` against all later elements.
#[derive(Clone)]
struct RowScan {
    best: usize,
    best_j: Option<usize>,
    histogram: Vec<u64>,
}

fn merge_rows(rows: Vec<(usize, RowScan)>, dim: usize) -> (usize, Option<(usize, usize)>, Vec<u64>) {
    let mut r = 0;
    let mut witness = None;
    let mut hist = vec![0u64; dim + 1];
    // rows arrive in increasing i, so the first row reaching the maximum
    // holds the lexicographically smallest pair
    for (i, row) in rows {
        if let Some(j) = row.best_j {
            if row.best > r {
                r = row.best;
                witness = Some((i, j));
            }
        }
        for (h, c) in hist.iter_mut().zip(&row.histogram) {
            *h += c;
        }
    }
    (r, witness, hist)
}

/// `ρ` and its witness: the minimum nonzero `rank(D - I)` over diagonal
/// elements, first attained in the given order.
fn rho_of<'a, E: GroupElement + 'a>(elements: impl Iterator<Item = &'a E>) -> Option<(usize, E)> {
    let mut best: Option<(usize, &E)> = None;
    for x in elements.filter(|x| x.is_diagonal()) {
        let k = x.rank_minus_identity();
        if k > 0 && best.is_none_or(|(b, _)| k < b) {
            best = Some((k, x));
        }
    }
    best.map(|(k, x)| (k, x.clone()))
}

/// Invariants of a monomial group. Elements are scanned in their sorted
/// (canonical) order, so groups with equal element sets yield identical
/// reports regardless of the generators used. The pair scan is split over
/// the rayon thread pool.
pub fn compute_invariants(g: &GroupSet) -> InvariantsReport<MonomialMatrix> {
    let mut sorted: Vec<&MonomialMatrix> = g.elements().iter().collect();
    sorted.sort();
    let n = g.dim();
    let rho = rho_of(sorted.iter().copied());
    let rows: Vec<(usize, RowScan)> = (0..sorted.len())
        .into_par_iter()
        .map(|i| {
            let x = sorted[i];
            let mut row = RowScan {
                best: 0,
                best_j: None,
                histogram: vec![0; n + 1],
            };
            for (j, y) in sorted.iter().enumerate().skip(i + 1) {
                let k = commutator_rank_monomial(x, y);
                row.histogram[k] += 1;
                if k > row.best {
                    row.best = k;
                    row.best_j = Some(j);
                }
            }
            (i, row)
        })
        .collect();
    let (r, w, hist) = merge_rows(rows, n);
    InvariantsReport {
        order: g.order(),
        rho: rho.as_ref().map(|(k, _)| *k),
        r,
        abelian: g.is_abelian(),
        rho_witness: rho.map(|(_, x)| x),
        r_witness: w.map(|(i, j)| (sorted[i].clone(), sorted[j].clone())),
        rank_histogram: hist,
    }
}

/// Invariants of an arbitrary finite matrix group, scanning in enumeration
/// order. Commutators are located through the multiplication table and the
/// rank of `K - I` is computed once per distinct commutator `K`.
pub fn compute_invariants_generic<E: GroupElement>(g: &FiniteGroup<E>) -> InvariantsReport<E> {
    let n = g.dim();
    let t = g.cayley_table();
    let len = g.order();
    let ranks = commutator_ranks_by_element(g, &t);
    let rho = rho_of(g.elements().iter());
    let rows: Vec<(usize, RowScan)> = (0..len)
        .into_par_iter()
        .map(|i| {
            let mut row = RowScan {
                best: 0,
                best_j: None,
                histogram: vec![0; n + 1],
            };
            for j in i + 1..len {
                let k = ranks[t.commutator(i, j)].expect("commutator rank computed");
                row.histogram[k] += 1;
                if k > row.best {
                    row.best = k;
                    row.best_j = Some(j);
                }
            }
            (i, row)
        })
        .collect();
    let (r, w, hist) = merge_rows(rows, n);
    let e = g.elements();
    InvariantsReport {
        order: len,
        rho: rho.as_ref().map(|(k, _)| *k),
        r,
        abelian: g.is_abelian(),
        rho_witness: rho.map(|(_, x)| x),
        r_witness: w.map(|(i, j)| (e[i].clone(), e[j].clone())),
        rank_histogram: hist,
    }
}

/// `rank(K - I)` for every element `K` that occurs as a commutator.
fn commutator_ranks_by_element<E: GroupElement>(
    g: &FiniteGroup<E>,
    t: &crate::engine::group::CayleyTable,
) -> Vec<Option<usize>> {
    let len = g.order();
    let mut is_comm = vec![false; len];
    for i in 0..len {
        for j in 0..len {
            is_comm[t.commutator(i, j)] = true;
        }
    }
    let e = g.elements();
    (0..len)
        .into_par_iter()
        .map(|k| is_comm[k].then(|| e[k].rank_minus_identity()))
        .collect()
}

/// Elements with the identity permutation pattern (diagonal elements).
pub fn diagonal_subgroup<E: GroupElement>(g: &FiniteGroup<E>, cap: usize) -> Result<FiniteGroup<E>> {
    FiniteGroup::generated_by_subset(&g.filter(|x| x.is_diagonal()), cap)
}

/// The commutator subgroup, computed as the normal closure of the
/// commutators of generator pairs (which equals the subgroup generated by
/// all commutators).
pub fn commutator_subgroup<E: GroupElement>(g: &FiniteGroup<E>, cap: usize) -> Result<FiniteGroup<E>> {
    let gens = g.generators();
    let mut seeds = Vec::new();
    for x in gens {
        for y in gens {
            let xi = x.invert()?;
            let yi = y.invert()?;
            seeds.push(x.compose(y)?.compose(&xi)?.compose(&yi)?);
        }
    }
    g.normal_closure(&seeds, cap)
}

/// Brute-force commutator subgroup: the closure of all `XYX⁻¹Y⁻¹`. Quadratic
/// in the group order; kept as an independent cross-check.
pub fn commutator_subgroup_exhaustive<E: GroupElement>(g: &FiniteGroup<E>, cap: usize) -> Result<FiniteGroup<E>> {
    let t = g.cayley_table();
    let e = g.elements();
    let mut seen = vec![false; g.order()];
    for i in 0..g.order() {
        for j in 0..g.order() {
            seen[t.commutator(i, j)] = true;
        }
    }
    let comms: Vec<E> = (0..g.order()).filter(|&k| seen[k]).map(|k| e[k].clone()).collect();
    FiniteGroup::generated_by_subset(&comms, cap)
}

/// `rank(XY - YX)` for two elements of the same kind.
pub fn commutator_rank<E: GroupElement>(x: &E, y: &E) -> Result<usize> {
    x.commutator_rank(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::group::{DenseGroup, DEFAULT_CAP};
    use crate::matgroup::make_gpqa_generators;
    use crate::RootOrder;

    fn gpqa(p: u32, q: u32, a: &[u32]) -> GroupSet {
        let (s, a) = make_gpqa_generators(p, q, a).unwrap();
        GroupSet::closure(&[s, a], DEFAULT_CAP).unwrap()
    }

    fn diag(e: &[u32], q: u32) -> MonomialMatrix {
        MonomialMatrix::diagonal(e.to_vec(), RootOrder::new(q).unwrap())
    }

    fn sorted(g: &GroupSet) -> Vec<MonomialMatrix> {
        let mut v = g.elements().to_vec();
        v.sort();
        v
    }

    /// Oracle: maximum of `rank(XY - YX)` over all ordered pairs by dense
    /// elimination.
    fn dense_r(g: &GroupSet) -> usize {
        let dense: Vec<_> = g.elements().iter().map(|x| x.to_dense()).collect();
        let mut r = 0;
        for x in &dense {
            for y in &dense {
                r = r.max(x.commutator_rank(y).unwrap());
            }
        }
        r
    }

    #[test]
    fn g222_subgroups() {
        let g = gpqa(2, 2, &[0, 1]);
        let d = diagonal_subgroup(&g, DEFAULT_CAP).unwrap();
        let mut de = d.elements().to_vec();
        de.sort();
        let mut want = vec![diag(&[0, 0], 2), diag(&[1, 1], 2), diag(&[0, 1], 2), diag(&[1, 0], 2)];
        want.sort();
        assert_eq!(de, want);
        let c = commutator_subgroup(&g, DEFAULT_CAP).unwrap();
        let mut ce = c.elements().to_vec();
        ce.sort();
        assert_eq!(ce, vec![diag(&[0, 0], 2), diag(&[1, 1], 2)]);
        let inv = compute_invariants(&g);
        assert_eq!((inv.order, inv.rho, inv.r), (8, Some(1), 2));
        assert_eq!(dense_r(&g), 2);
    }

    #[test]
    fn g3_2_100_subgroups() {
        let g = gpqa(3, 2, &[1, 0, 0]);
        let d = diagonal_subgroup(&g, DEFAULT_CAP).unwrap();
        assert_eq!(d.order(), 8);
        let c = commutator_subgroup(&g, DEFAULT_CAP).unwrap();
        let mut ce = c.elements().to_vec();
        ce.sort();
        let mut want = vec![
            diag(&[0, 0, 0], 2),
            diag(&[0, 1, 1], 2),
            diag(&[1, 0, 1], 2),
            diag(&[1, 1, 0], 2),
        ];
        want.sort();
        assert_eq!(ce, want);
        assert_eq!(compute_invariants(&g).rho, Some(1));
    }

    #[test]
    fn g3_2_110_invariants() {
        let g = gpqa(3, 2, &[1, 1, 0]);
        let inv = compute_invariants(&g);
        assert_eq!((inv.rho, inv.r), (Some(2), 2));
        assert_eq!(dense_r(&g), 2);
    }

    #[test]
    fn commutator_rank_examples() {
        let o3 = RootOrder::new(3).unwrap();
        let s = MonomialMatrix::cyclic_shift(3, o3);
        let a0 = MonomialMatrix::diagonal(vec![1, 2, 0], o3);
        assert_eq!(commutator_rank(&a0, &a0).unwrap(), 0);
        assert_eq!(commutator_rank(&a0, &s).unwrap(), 3);
        let o2 = RootOrder::new(2).unwrap();
        let x = MonomialMatrix::diagonal(vec![0, 1, 1], o2);
        let s2 = MonomialMatrix::cyclic_shift(3, o2);
        assert_eq!(commutator_rank(&x, &s2).unwrap(), 2);
        assert_eq!(x.to_dense().commutator_rank(&s2.to_dense()).unwrap(), 2);
    }

    #[test]
    fn abelian_group_has_zero_r() {
        let o = RootOrder::new(3).unwrap();
        let g = GroupSet::closure(
            &[
                MonomialMatrix::diagonal(vec![1, 0, 0], o),
                MonomialMatrix::diagonal(vec![0, 1, 2], o),
            ],
            DEFAULT_CAP,
        )
        .unwrap();
        let inv = compute_invariants(&g);
        assert_eq!((inv.r, inv.abelian, inv.rho), (0, true, Some(1)));
        assert!(inv.r_witness.is_none());
    }

    #[test]
    fn generic_route_matches_monomial_route() {
        for (p, q, a) in [
            (2u32, 3u32, vec![0u32, 1]),
            (3, 2, vec![1, 1, 0]),
            (3, 3, vec![1, 2, 0]),
        ] {
            let (s, am) = make_gpqa_generators(p, q, &a).unwrap();
            let mono = GroupSet::closure(&[s.clone(), am.clone()], DEFAULT_CAP).unwrap();
            let dense = DenseGroup::closure(&[s.to_dense(), am.to_dense()], DEFAULT_CAP).unwrap();
            let a = compute_invariants(&mono);
            let b = compute_invariants_generic(&dense);
            assert_eq!(
                (a.order, a.rho, a.r, &a.rank_histogram),
                (b.order, b.rho, b.r, &b.rank_histogram)
            );
            let via_mono = compute_invariants_generic(&mono);
            assert_eq!(via_mono.rank_histogram, a.rank_histogram);
        }
    }

    #[test]
    fn fast_commutator_subgroup_matches_exhaustive() {
        for (p, q, a) in [
            (2u32, 2u32, vec![0u32, 1]),
            (3, 2, vec![1, 0, 0]),
            (3, 3, vec![1, 0, 0]),
            (5, 2, vec![1, 1, 0, 0, 0]),
        ] {
            let g = gpqa(p, q, &a);
            let fast = commutator_subgroup(&g, DEFAULT_CAP).unwrap();
            let slow = commutator_subgroup_exhaustive(&g, DEFAULT_CAP).unwrap();
            let (mut x, mut y) = (fast.elements().to_vec(), slow.elements().to_vec());
            x.sort();
            y.sort();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn rotated_a_gives_identical_report() {
        let a = compute_invariants(&gpqa(5, 3, &[1, 2, 0, 0, 0]));
        let b = compute_invariants(&gpqa(5, 3, &[0, 0, 1, 2, 0]));
        assert_eq!(a, b);
    }

    #[test]
    fn invariant_chain_and_no_rank_one() {
        for (p, q, a) in [
            (3u32, 2u32, vec![1u32, 0, 0]),
            (3, 3, vec![1, 1, 0]),
            (5, 2, vec![1, 0, 1, 0, 0]),
            (2, 5, vec![0, 2]),
        ] {
            let g = gpqa(p, q, &a);
            let inv = compute_invariants(&g);
            assert_eq!(inv.rank_one_pairs(), 0);
            let rho = inv.rho.unwrap();
            assert!(1 <= rho && rho <= inv.r && inv.r <= p as usize, "{p} {q} {a:?}");
            let (x, y) = inv.r_witness.clone().unwrap();
            assert_eq!(commutator_rank_monomial(&x, &y), inv.r);
            assert!(sorted(&g).contains(&x));
        }
    }
}
