use serde::Serialize;

use crate::cyclotomic::{CycNum, RootOrder};
use crate::error::{Error, Result};
use crate::matgroup::DenseMatrix;
use crate::reducibility::subspace::{unit_vector, Echelon, Subspace};

/// A linear span of `n x n` matrices with a basis independent as
/// `n²`-vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraSpan {
    pub n: usize,
    pub dim: usize,
    pub basis: Vec<DenseMatrix>,
}

fn common_order(gens: &[DenseMatrix]) -> Result<RootOrder> {
    gens.iter().try_fold(RootOrder::ONE, |o, g| o.lcm(g.order()))
}

fn check_square(gens: &[DenseMatrix]) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Err(Error::input("no generators"));
    };
    let n = first.rows();
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::shape("generators must be square of one size"));
    }
    Ok(n)
}

/// The algebra generated by `gens` (and `I` when requested): seeded with
/// the generators, then closed under left multiplication by generators,
/// which yields the span of all words.
pub fn algebra_span(gens: &[DenseMatrix], include_identity: bool) -> Result<AlgebraSpan> {
    let n = check_square(gens)?;
    let order = common_order(gens)?;
    let gens: Vec<DenseMatrix> = gens.iter().map(|g| g.lift(order)).collect::<Result<_>>()?;
    let mut ech = Echelon::new(n * n);
    let mut basis = Vec::new();
    let mut queue = Vec::new();
    let mut seeds = Vec::new();
    if include_identity {
        seeds.push(DenseMatrix::identity(n, order));
    }
    seeds.extend(gens.iter().cloned());
    for s in seeds {
        if ech.insert(s.entries().to_vec()) {
            basis.push(s.clone());
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() && ech.rank() < n * n {
        let b = queue[head].clone();
        head += 1;
        for g in &gens {
            let p = g.mul(&b)?;
            if ech.insert(p.entries().to_vec()) {
                basis.push(p.clone());
                queue.push(p);
            }
        }
    }
    Ok(AlgebraSpan {
        n,
        dim: basis.len(),
        basis,
    })
}

/// Burnside: irreducible iff the unital algebra is all of `M_n`.
pub fn is_irreducible(gens: &[DenseMatrix]) -> Result<bool> {
    let n = check_square(gens)?;
    Ok(algebra_span(gens, true)?.dim == n * n)
}

/// All `X` with `X g = g X` for every generator.
pub fn commutant(gens: &[DenseMatrix]) -> Result<AlgebraSpan> {
    let n = check_square(gens)?;
    let order = common_order(gens)?;
    let nn = n * n;
    let mut ech = Echelon::new(nn);
    'eqs: for g in gens {
        let g = g.lift(order)?;
        for i in 0..n {
            for j in 0..n {
                // (Xg - gX)_{ij} = Σ_k X_{ik} g_{kj} - g_{ik} X_{kj}
                let mut row = vec![CycNum::zero(order); nn];
                for k in 0..n {
                    row[i * n + k] = &row[i * n + k] + g.get(k, j);
                    row[k * n + j] = &row[k * n + j] - g.get(i, k);
                }
                ech.insert(row);
                if ech.rank() == nn - 1 {
                    // scalars always commute, so nothing more can be cut
                    break 'eqs;
                }
            }
        }
    }
    let rows = ech.into_rows();
    let sys = if rows.is_empty() {
        DenseMatrix::zeros(0, nn, order)
    } else {
        DenseMatrix::from_rows(rows)?.lift(order)?
    };
    let basis: Vec<DenseMatrix> = kernel_or_full(&sys, nn, order)
        .into_iter()
        .map(|v| DenseMatrix::from_fn(n, n, order, |i, j| v[i * n + j].clone()))
        .collect::<Result<_>>()?;
    Ok(AlgebraSpan {
        n,
        dim: basis.len(),
        basis,
    })
}

fn kernel_or_full(sys: &DenseMatrix, cols: usize, order: RootOrder) -> Vec<Vec<CycNum>> {
    if sys.rows() == 0 {
        return (0..cols).map(|i| unit_vector(cols, i, order)).collect();
    }
    sys.kernel()
}

/// `span(algebra · v)`: the smallest subspace containing `v` and invariant
/// under every generator.
pub fn cyclic_subspace(gens: &[DenseMatrix], v: &[CycNum]) -> Result<Subspace> {
    let n = check_square(gens)?;
    let order = common_order(gens)?;
    let mut ech = Echelon::new(n);
    let v: Vec<CycNum> = v.iter().map(|x| x.lift(order.lcm(x.order())?)).collect::<Result<_>>()?;
    let mut queue = vec![v.clone()];
    ech.insert(v);
    let mut head = 0;
    while head < queue.len() && ech.rank() < n {
        let w = queue[head].clone();
        head += 1;
        for g in gens {
            let gw = g.apply(&w)?;
            if ech.insert(gw.clone()) {
                queue.push(gw);
            }
        }
    }
    Subspace::span(n, &queue, order)
}

/// `ker(K - λI)`.
pub fn eigenspace(k: &DenseMatrix, lambda: &CycNum) -> Result<Subspace> {
    let n = k.rows();
    let order = k.order().lcm(lambda.order())?;
    let shifted = k.sub(&DenseMatrix::identity(n, order).scale(lambda)?)?;
    Subspace::span(n, &kernel_or_full(&shifted, n, order), order)
}

/// Roots of unity of every order dividing `l`, in order of exponent.
fn roots_dividing(l: u32) -> Result<Vec<CycNum>> {
    let o = RootOrder::new(l)?;
    Ok((0..l as i64).map(|k| CycNum::root_of_unity(k, o)).collect())
}

/// Outcome of [`find_invariant_subspace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum InvariantSubspace {
    Irreducible {
        algebra_dim: usize,
    },
    Found {
        subspace: Subspace,
        method: String,
    },
    /// The search strategies failed although the algebra is proper; the
    /// algebra dimension certifies reducibility.
    NotFound {
        algebra_dim: usize,
    },
}

/// Orders candidate subspaces: smaller dimension first, then pivots.
fn better(a: &Subspace, b: &Subspace) -> bool {
    (a.dim(), a.pivots()) < (b.dim(), b.pivots())
}

/// Finds a nontrivial common invariant subspace, verified exactly.
///
/// With `self_adjoint_closed` the commutant is searched first: for a
/// nonscalar commuting `K`, every proper eigenspace `ker(K - λI)` is
/// invariant. Eigenvalue candidates are `0`, the diagonal entries of `K`
/// and roots of unity of order dividing `lcm(m, 12)`. Among all proper
/// eigenspaces found the smallest (then the one with earliest pivots) is
/// returned. Otherwise, or if no eigenvalue lies in the field, cyclic
/// subspaces of `e_i` and `e_i ± e_j` are tried, then annihilators of
/// subspaces invariant under the transposes.
pub fn find_invariant_subspace(gens: &[DenseMatrix], self_adjoint_closed: bool) -> Result<InvariantSubspace> {
    let n = check_square(gens)?;
    let alg = algebra_span(gens, true)?;
    if alg.dim == n * n {
        return Ok(InvariantSubspace::Irreducible { algebra_dim: alg.dim });
    }
    let order = common_order(gens)?;
    let verify = |s: &Subspace| gens.iter().all(|g| s.is_invariant(g));
    if self_adjoint_closed {
        let comm = commutant(gens)?;
        let mut best: Option<Subspace> = None;
        let roots = roots_dividing(order.lcm(RootOrder::new(12)?)?.get())?;
        for k in comm.basis.iter().filter(|k| !k.is_scalar()) {
            let mut cands: Vec<CycNum> = vec![CycNum::zero(RootOrder::ONE)];
            cands.extend((0..n).map(|i| k.get(i, i).clone()));
            cands.extend(roots.iter().cloned());
            let mut tried: Vec<CycNum> = Vec::new();
            for lam in cands {
                if tried.contains(&lam) {
                    continue;
                }
                let e = eigenspace(k, &lam)?;
                tried.push(lam);
                if e.dim() > 0 && e.dim() < n && best.as_ref().is_none_or(|b| better(&e, b)) {
                    best = Some(e);
                }
            }
        }
        if let Some(s) = best {
            if verify(&s) {
                return Ok(InvariantSubspace::Found {
                    subspace: s,
                    method: "commutant eigenspace".into(),
                });
            }
        }
    }
    let probes = probe_vectors(n, order);
    for v in &probes {
        let s = cyclic_subspace(gens, v)?;
        if s.dim() > 0 && s.dim() < n && verify(&s) {
            return Ok(InvariantSubspace::Found {
                subspace: s,
                method: "cyclic subspace".into(),
            });
        }
    }
    let transposed: Vec<DenseMatrix> = gens.iter().map(DenseMatrix::transpose).collect();
    for v in &probes {
        let s = cyclic_subspace(&transposed, v)?;
        if s.dim() > 0 && s.dim() < n {
            let a = s.annihilator();
            if verify(&a) {
                return Ok(InvariantSubspace::Found {
                    subspace: a,
                    method: "transpose cyclic subspace".into(),
                });
            }
        }
    }
    Ok(InvariantSubspace::NotFound { algebra_dim: alg.dim })
}

/// `e_i`, then `e_i + e_j` and `e_i - e_j` for `i < j`.
fn probe_vectors(n: usize, order: RootOrder) -> Vec<Vec<CycNum>> {
    let mut out: Vec<Vec<CycNum>> = (0..n).map(|i| unit_vector(n, i, order)).collect();
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1, -1] {
                let mut v = unit_vector(n, i, order);
                v[j] = CycNum::from_int(sign, order);
                out.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{make_gpqa_generators, MonomialMatrix};

    fn o(m: u32) -> RootOrder {
        RootOrder::new(m).unwrap()
    }

    fn gpqa_dense(p: u32, q: u32, a: &[u32]) -> Vec<DenseMatrix> {
        let (s, a) = make_gpqa_generators(p, q, a).unwrap();
        vec![s.to_dense(), a.to_dense()]
    }

    #[test]
    fn identity_algebra() {
        let span = algebra_span(&[DenseMatrix::identity(3, o(1))], false).unwrap();
        assert_eq!(span.dim, 1);
        assert_eq!(commutant(&[DenseMatrix::identity(2, o(1))]).unwrap().dim, 4);
    }

    #[test]
    fn gpqa_irreducible() {
        let g = gpqa_dense(3, 2, &[1, 0, 0]);
        assert_eq!(algebra_span(&g, true).unwrap().dim, 9);
        assert!(is_irreducible(&g).unwrap());
        assert!(is_irreducible(&gpqa_dense(2, 3, &[0, 1])).unwrap());
        assert_eq!(commutant(&g).unwrap().dim, 1);
    }

    #[test]
    fn diagonal_groups_are_reducible() {
        let g = vec![MonomialMatrix::diagonal(vec![0, 1], o(2)).to_dense()];
        assert!(!is_irreducible(&g).unwrap());
        let InvariantSubspace::Found { subspace, .. } = find_invariant_subspace(&g, true).unwrap() else {
            panic!("expected a subspace")
        };
        assert_eq!(subspace, Subspace::coordinate(2, &[0], o(2)));
    }

    #[test]
    fn upper_triangular_semigroup() {
        let g = vec![DenseMatrix::identity(2, o(1)), DenseMatrix::unit(2, 0, 1, o(1))];
        let r = find_invariant_subspace(&g, false).unwrap();
        let InvariantSubspace::Found { subspace, .. } = r else {
            panic!("expected a subspace")
        };
        assert_eq!(subspace, Subspace::coordinate(2, &[0], o(1)));
    }

    fn ints(rows: &[&[i64]]) -> DenseMatrix {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNum::from_int(v, o(1))).collect())
                .collect(),
        )
        .unwrap()
    }

    /// `P diag(1, 2, 3) P⁻¹`; its invariant subspaces are spans of columns
    /// of `P`.
    fn conjugated_diagonal(p: &DenseMatrix) -> DenseMatrix {
        let d = ints(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        p.mul(&d).unwrap().mul(&p.inverse().unwrap()).unwrap()
    }

    #[test]
    fn transpose_route() {
        // no probe lies in a span of two columns of P, but one lies in a
        // span of two rows of P⁻¹
        let p = ints(&[&[-1, -1, -1], &[-1, 0, 2], &[-1, 2, 1]]);
        let m = conjugated_diagonal(&p);
        let r = find_invariant_subspace(std::slice::from_ref(&m), false).unwrap();
        let InvariantSubspace::Found { subspace, method } = r else {
            panic!("expected a subspace")
        };
        assert_eq!(method, "transpose cyclic subspace");
        assert!(subspace.is_invariant(&m));
        assert!(subspace.dim() > 0 && subspace.dim() < 3);
    }

    #[test]
    fn search_failure_is_reported() {
        // 2x2 with eigenvectors (1, 2) and (1, 3): no probe or transpose
        // probe is an eigenvector
        let p = ints(&[&[1, 1], &[2, 3]]);
        let m = p
            .mul(&ints(&[&[1, 0], &[0, 2]]))
            .unwrap()
            .mul(&p.inverse().unwrap())
            .unwrap();
        assert_eq!(
            find_invariant_subspace(&[m], false).unwrap(),
            InvariantSubspace::NotFound { algebra_dim: 2 }
        );
    }

    #[test]
    fn block_sum_split_by_commutant() {
        let (s, a) = make_gpqa_generators(3, 2, &[1, 0, 0]).unwrap();
        let one = MonomialMatrix::identity(1, o(2));
        let gens = vec![
            s.direct_sum(&one).unwrap().to_dense(),
            a.direct_sum(&one).unwrap().to_dense(),
        ];
        assert_eq!(commutant(&gens).unwrap().dim, 2);
        let InvariantSubspace::Found { subspace, .. } = find_invariant_subspace(&gens, true).unwrap() else {
            panic!("expected a subspace")
        };
        assert!(
            subspace == Subspace::coordinate(4, &[3], o(2)) || subspace == Subspace::coordinate(4, &[0, 1, 2], o(2))
        );
        assert!(gens.iter().all(|g| subspace.orthocomplement().is_invariant(g)));
    }

    #[test]
    fn cyclic_subspace_of_shift() {
        let s = MonomialMatrix::cyclic_shift(4, o(1)).to_dense();
        let ones = vec![CycNum::one(o(1)); 4];
        assert_eq!(cyclic_subspace(std::slice::from_ref(&s), &ones).unwrap().dim(), 1);
        assert_eq!(cyclic_subspace(&[s], &unit_vector(4, 0, o(1))).unwrap().dim(), 4);
    }
}
