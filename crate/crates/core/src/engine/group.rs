use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::matgroup::{commutator_rank_monomial, DenseMatrix, MonomialMatrix};

/// Default bound on the number of elements enumerated by a closure.
pub const DEFAULT_CAP: usize = 100_000;

/// Operations a matrix type needs to take part in group enumeration.
pub trait GroupElement: Clone + Eq + Hash + Send + Sync + std::fmt::Debug {
    fn dim(&self) -> usize;
    fn identity_like(&self) -> Self;
    fn compose(&self, other: &Self) -> Result<Self>;
    fn invert(&self) -> Result<Self>;
    fn is_diagonal(&self) -> bool;
    /// `rank(self - I)`.
    fn rank_minus_identity(&self) -> usize;
    /// `rank(XY - YX) = rank(XYX⁻¹Y⁻¹ - I)`.
    fn commutator_rank(&self, other: &Self) -> Result<usize>;
    fn to_dense(&self) -> DenseMatrix;
}

impl GroupElement for MonomialMatrix {
    fn dim(&self) -> usize {
        MonomialMatrix::dim(self)
    }

    fn identity_like(&self) -> Self {
        MonomialMatrix::identity(self.dim(), self.order())
    }

    fn compose(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn invert(&self) -> Result<Self> {
        Ok(self.inverse())
    }

    fn is_diagonal(&self) -> bool {
        MonomialMatrix::is_diagonal(self)
    }

    fn rank_minus_identity(&self) -> usize {
        MonomialMatrix::rank_minus_identity(self)
    }

    fn commutator_rank(&self, other: &Self) -> Result<usize> {
        if self.dim() != other.dim() || self.order() != other.order() {
            return Err(Error::shape("commutator of incompatible monomial matrices"));
        }
        Ok(commutator_rank_monomial(self, other))
    }

    fn to_dense(&self) -> DenseMatrix {
        MonomialMatrix::to_dense(self)
    }
}

impl GroupElement for DenseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn identity_like(&self) -> Self {
        DenseMatrix::identity(self.rows(), self.order())
    }

    fn compose(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn invert(&self) -> Result<Self> {
        self.inverse()
    }

    fn is_diagonal(&self) -> bool {
        DenseMatrix::is_diagonal(self)
    }

    fn rank_minus_identity(&self) -> usize {
        self.sub(&self.identity_like()).expect("square").rank()
    }

    fn commutator_rank(&self, other: &Self) -> Result<usize> {
        DenseMatrix::commutator_rank(self, other)
    }

    fn to_dense(&self) -> DenseMatrix {
        self.clone()
    }
}

/// A finite matrix group enumerated by breadth-first closure.
///
/// Element 0 is the identity. When built by [`FiniteGroup::closure`] the
/// group also records, for each element, the BFS parent and the generator
/// applied on the left, which lets the multiplication table be assembled
/// from left-multiplication maps without further matrix products.
#[derive(Debug, Clone)]
pub struct FiniteGroup<E> {
    elements: Vec<E>,
    index: HashMap<E, u32>,
    generators: Vec<E>,
    /// Generators followed by their inverses.
    moves: Vec<E>,
    /// `left[k][x]` is the index of `moves[k] · elements[x]`.
    left: Vec<Vec<u32>>,
    /// `(parent, k)` with `elements[i] = moves[k] · elements[parent]`.
    parent: Vec<Option<(u32, u16)>>,
}

pub type GroupSet = FiniteGroup<MonomialMatrix>;
pub type DenseGroup = FiniteGroup<DenseMatrix>;

impl<E: GroupElement> FiniteGroup<E> {
    /// Breadth-first closure of `generators` under left multiplication by
    /// the generators and their inverses. Fails once more than `cap`
    /// elements have been found.
    pub fn closure(generators: &[E], cap: usize) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::input("closure needs at least one generator"));
        };
        let n = first.dim();
        if generators.iter().any(|g| g.dim() != n) {
            return Err(Error::shape("generators differ in dimension"));
        }
        if cap == 0 {
            return Err(Error::input("cap must be positive"));
        }
        let mut moves = generators.to_vec();
        for g in generators {
            moves.push(g.invert()?);
        }
        let id = first.identity_like();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut parent = vec![None];
        let mut left: Vec<Vec<u32>> = vec![Vec::new(); moves.len()];
        let mut head = 0;
        while head < elements.len() {
            for (k, g) in moves.iter().enumerate() {
                let y = g.compose(&elements[head])?;
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        let i = elements.len() as u32;
                        index.insert(y.clone(), i);
                        elements.push(y);
                        parent.push(Some((head as u32, k as u16)));
                        i
                    }
                };
                left[k].push(idx);
            }
            head += 1;
        }
        Ok(FiniteGroup {
            elements,
            index,
            generators: generators.to_vec(),
            moves,
            left,
            parent,
        })
    }

    /// The subgroup generated by `subset`, built by adding elements of the
    /// subset (in the given order) as generators only when they are not
    /// already generated.
    pub fn generated_by_subset(subset: &[E], cap: usize) -> Result<Self> {
        let Some(first) = subset.first() else {
            return Err(Error::input("empty subset"));
        };
        let mut gens: Vec<E> = Vec::new();
        let mut group = FiniteGroup::closure(&[first.identity_like()], cap)?;
        for x in subset {
            if !group.contains(x) {
                gens.push(x.clone());
                group = FiniteGroup::closure(&gens, cap)?;
            }
        }
        Ok(group)
    }

    /// Normal closure of `seeds` in this group: the smallest subgroup that
    /// contains them and is stable under conjugation by the generators.
    pub fn normal_closure(&self, seeds: &[E], cap: usize) -> Result<Self> {
        let id = self.elements[0].clone();
        let mut gens: Vec<E> = Vec::new();
        let mut sub = FiniteGroup::closure(&[id], cap)?;
        let mut pending: Vec<E> = seeds.to_vec();
        while let Some(h) = pending.pop() {
            if sub.contains(&h) {
                continue;
            }
            gens.push(h.clone());
            sub = FiniteGroup::closure(&gens, cap)?;
            for x in &self.generators {
                let xi = x.invert()?;
                pending.push(x.compose(&h)?.compose(&xi)?);
                pending.push(xi.compose(&h)?.compose(x)?);
            }
        }
        // Every generator of `sub` has all its conjugates inside `sub`, so
        // `sub` is normal.
        Ok(sub)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn identity(&self) -> &E {
        &self.elements[0]
    }

    pub fn contains(&self, x: &E) -> bool {
        self.index.contains_key(x)
    }

    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    /// True when the generators commute pairwise.
    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| {
            (i + 1..g.len()).all(|j| matches!((g[i].compose(&g[j]), g[j].compose(&g[i])), (Ok(a), Ok(b)) if a == b))
        })
    }

    /// Elements satisfying `pred`, in enumeration order.
    pub fn filter(&self, pred: impl Fn(&E) -> bool) -> Vec<E> {
        self.elements.iter().filter(|x| pred(x)).cloned().collect()
    }

    /// The full multiplication table: `table.product(i, j)` is the index of
    /// `elements[i] · elements[j]`.
    pub fn cayley_table(&self) -> CayleyTable {
        let n = self.elements.len();
        let mut prod = vec![0u32; n * n];
        for (j, x) in prod.iter_mut().take(n).enumerate() {
            *x = j as u32;
        }
        // BFS order guarantees parents precede children.
        for i in 1..n {
            let (par, k) = self.parent[i].expect("non-identity element has a parent");
            let (par, k) = (par as usize, k as usize);
            for j in 0..n {
                let pj = prod[par * n + j] as usize;
                prod[i * n + j] = self.left[k][pj];
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = (0..n)
                .find(|&j| prod[i * n + j] == 0)
                .expect("group element has an inverse") as u32;
        }
        CayleyTable { n, prod, inv }
    }

    pub fn moves(&self) -> &[E] {
        &self.moves
    }
}

/// Multiplication table of a finite group, indices as in the group.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    n: usize,
    prod: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.prod[i * self.n + j] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    /// Index of `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, i: usize, j: usize) -> usize {
        let xy = self.product(i, j);
        let yx = self.product(j, i);
        self.product(xy, self.inverse(yx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::make_gpqa_generators;
    use crate::RootOrder;

    #[test]
    fn trivial_group() {
        let i = MonomialMatrix::identity(3, RootOrder::ONE);
        let g = GroupSet::closure(&[i], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_abelian());
    }

    #[test]
    fn g222_has_order_8() {
        let (s, a) = make_gpqa_generators(2, 2, &[0, 1]).unwrap();
        let g = GroupSet::closure(&[s, a], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert!(g.identity().is_identity());
    }

    #[test]
    fn cap_is_enforced() {
        let (s, a) = make_gpqa_generators(3, 3, &[1, 0, 0]).unwrap();
        assert!(matches!(
            GroupSet::closure(&[s.clone(), a.clone()], 50),
            Err(Error::CapExceeded { cap: 50 })
        ));
        assert_eq!(GroupSet::closure(&[s, a], 81).unwrap().order(), 81);
    }

    #[test]
    fn cayley_table_matches_products() {
        let (s, a) = make_gpqa_generators(3, 2, &[1, 0, 0]).unwrap();
        let g = GroupSet::closure(&[s, a], DEFAULT_CAP).unwrap();
        let t = g.cayley_table();
        let e = g.elements();
        for i in 0..g.order() {
            for j in 0..g.order() {
                assert_eq!(e[t.product(i, j)], e[i].mul(&e[j]).unwrap());
            }
            assert!(e[i].mul(&e[t.inverse(i)]).unwrap().is_identity());
        }
    }

    #[test]
    fn dense_closure_agrees_with_monomial() {
        let (s, a) = make_gpqa_generators(3, 2, &[1, 1, 0]).unwrap();
        let mono = GroupSet::closure(&[s.clone(), a.clone()], DEFAULT_CAP).unwrap();
        let dense = DenseGroup::closure(&[s.to_dense(), a.to_dense()], DEFAULT_CAP).unwrap();
        assert_eq!(mono.order(), dense.order());
        for x in mono.elements() {
            assert!(dense.contains(&x.to_dense()));
        }
    }

    #[test]
    fn subset_and_normal_closure() {
        let (s, a) = make_gpqa_generators(3, 2, &[1, 0, 0]).unwrap();
        let g = GroupSet::closure(&[s.clone(), a.clone()], DEFAULT_CAP).unwrap();
        let diag = g.filter(|x| x.is_diagonal());
        let d = GroupSet::generated_by_subset(&diag, DEFAULT_CAP).unwrap();
        assert_eq!(d.order(), diag.len());
        let nc = g.normal_closure(&[a], DEFAULT_CAP).unwrap();
        assert_eq!(nc.order(), 8);
    }
}
