use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, RootOrder};
use crate::error::{Error, Result};
use crate::matgroup::DenseMatrix;

/// Incrementally built semi-echelon basis: each stored row is 1 at its
/// pivot and 0 at the pivots of all earlier rows.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    len: usize,
    rows: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub(crate) fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub(crate) fn reduce(&self, mut v: Vec<CycNum>) -> Vec<CycNum> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the stored rows; returns whether it
    /// was added.
    pub(crate) fn insert(&mut self, v: Vec<CycNum>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<CycNum>> {
        self.rows
    }
}

/// A linear subspace of `Q(ζ_m)^n`, stored as the nonzero rows of its
/// reduced row echelon basis. Equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    order: RootOrder,
    basis: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors.
    pub fn span(n: usize, vectors: &[Vec<CycNum>], order: RootOrder) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::shape(format!("vectors must have length {n}")));
        }
        if vectors.is_empty() {
            return Ok(Self::zero(n, order));
        }
        let m = DenseMatrix::from_rows(vectors.to_vec())?;
        let target = m.order().lcm(order)?;
        let (rr, pivots) = m.lift(target)?.rref();
        let basis = (0..pivots.len()).map(|i| rr.row(i).to_vec()).collect();
        Ok(Subspace {
            n,
            order: target,
            basis,
            pivots,
        })
    }

    pub fn zero(n: usize, order: RootOrder) -> Self {
        Subspace {
            n,
            order,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize, order: RootOrder) -> Self {
        Self::coordinate(n, &(0..n).collect::<Vec<_>>(), order)
    }

    /// `span{e_i : i ∈ idx}` (0-based).
    pub fn coordinate(n: usize, idx: &[usize], order: RootOrder) -> Self {
        let vs: Vec<Vec<CycNum>> = idx.iter().map(|&i| unit_vector(n, i, order)).collect();
        Self::span(n, &vs, order).expect("unit vectors have length n")
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> RootOrder {
        self.order
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn lift(&self, target: RootOrder) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        let basis = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x.lift(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace {
            n: self.n,
            order: target,
            basis,
            pivots: self.pivots.clone(),
        })
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis_matrix(&self) -> DenseMatrix {
        if self.basis.is_empty() {
            return DenseMatrix::zeros(0, self.n, self.order);
        }
        DenseMatrix::from_rows(self.basis.clone())
            .expect("basis rows have equal length")
            .lift(self.order)
            .expect("common order")
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[CycNum]) -> Option<Vec<CycNum>> {
        let c: Vec<CycNum> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = &*x - &(ci * y);
                }
            }
        }
        rest.iter().all(CycNum::is_zero).then_some(c)
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        v.len() == self.n && self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Self> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.n, &vs, self.order.lcm(other.order)?)
    }

    /// `{x : b · x = 0 for all b}` under the bilinear pairing
    /// `b · x = Σ b_i x_i`.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.n, self.order);
        }
        Self::span(self.n, &self.basis_matrix().kernel(), self.order).expect("kernel vectors have length n")
    }

    /// Orthogonal complement for the Hermitian inner product
    /// `⟨b, x⟩ = Σ conj(b_i) x_i`.
    pub fn orthocomplement(&self) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.n, self.order);
        }
        let conj: Vec<Vec<CycNum>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(CycNum::conj).collect())
            .collect();
        let m = DenseMatrix::from_rows(conj)
            .expect("equal lengths")
            .lift(self.order)
            .expect("common order");
        Self::span(self.n, &m.kernel(), self.order).expect("kernel vectors have length n")
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Self> {
        let a = self.annihilator().sum(&other.annihilator())?;
        let order = self.order.lcm(other.order)?;
        a.annihilator().lift(order)
    }

    /// `{M b : b ∈ self}`.
    pub fn image(&self, m: &DenseMatrix) -> Result<Self> {
        let order = self.order.lcm(m.order())?;
        let vs = self.basis.iter().map(|b| m.apply(b)).collect::<Result<Vec<_>>>()?;
        Self::span(self.n, &vs, order)
    }

    /// `{x ∈ self : M x ∈ target}`.
    pub fn preimage_within(&self, m: &DenseMatrix, target: &Subspace) -> Result<Self> {
        if self.basis.is_empty() {
            return Ok(self.clone());
        }
        let order = self.order.lcm(m.order())?.lcm(target.order)?;
        let ann = target.annihilator().lift(order)?;
        if ann.basis.is_empty() {
            return self.lift(order);
        }
        // coefficients c with C · M · Bᵀ c = 0
        let bt = self.lift(order)?.basis_matrix().transpose();
        let sys = ann.basis_matrix().mul(&m.mul(&bt)?)?;
        let coeffs = sys.kernel();
        let vs = coeffs.iter().map(|c| bt.apply(c)).collect::<Result<Vec<_>>>()?;
        Self::span(self.n, &vs, order)
    }

    /// True when `M self ⊆ self`.
    pub fn is_invariant(&self, m: &DenseMatrix) -> bool {
        self.basis
            .iter()
            .all(|b| m.apply(b).map(|w| self.contains(&w)).unwrap_or(false))
    }

    /// Matrix of `M` restricted to this (invariant) subspace, in the
    /// coordinates of the echelon basis.
    pub fn restrict(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        let order = self.order.lcm(m.order())?;
        let d = self.dim();
        let mut out = DenseMatrix::zeros(d, d, order);
        for (j, b) in self.basis.iter().enumerate() {
            let w = m.apply(b)?;
            let c = self
                .coordinates(&w)
                .ok_or_else(|| Error::precondition("subspace is not invariant"))?;
            for (i, ci) in c.into_iter().enumerate() {
                out.set(i, j, ci);
            }
        }
        Ok(out)
    }
}

pub fn unit_vector(n: usize, i: usize, order: RootOrder) -> Vec<CycNum> {
    (0..n)
        .map(|j| {
            if j == i {
                CycNum::one(order)
            } else {
                CycNum::zero(order)
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    dim: usize,
    basis: Vec<Vec<CycNum>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            n: self.n,
            dim: self.dim(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SubspaceRepr::deserialize(d)?;
        let mut order = RootOrder::ONE;
        for x in r.basis.iter().flatten() {
            order = order.lcm(x.order()).map_err(D::Error::custom)?;
        }
        let s = Subspace::span(r.n, &r.basis, order).map_err(D::Error::custom)?;
        if s.dim() != r.dim {
            return Err(D::Error::custom(format!(
                "declared dim {} but basis spans dim {}",
                r.dim,
                s.dim()
            )));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::MonomialMatrix;
    use proptest::prelude::*;

    fn o(m: u32) -> RootOrder {
        RootOrder::new(m).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<CycNum> {
        v.iter().map(|&x| CycNum::from_int(x, RootOrder::ONE)).collect()
    }

    #[test]
    fn canonical_basis() {
        let a = Subspace::span(3, &[ints(&[1, 1, 0]), ints(&[0, 1, 1])], o(1)).unwrap();
        let b = Subspace::span(3, &[ints(&[1, 2, 1]), ints(&[1, 0, -1]), ints(&[2, 2, 0])], o(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.basis()[0], ints(&[1, 0, -1]));
    }

    #[test]
    fn orthocomplement_uses_conjugation() {
        let i = CycNum::root_of_unity(1, o(4));
        let v = vec![CycNum::one(o(4)), i.clone()];
        let s = Subspace::span(2, &[v], o(4)).unwrap();
        let c = s.orthocomplement();
        assert_eq!(c.dim(), 1);
        let w = &c.basis()[0];
        let ip = &CycNum::one(o(4)).conj() * &w[0] + &i.conj() * &w[1];
        assert!(ip.is_zero());
        assert!(!s.contains(w));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::coordinate(4, &[0, 1], o(1));
        let b = Subspace::span(4, &[ints(&[1, 0, 1, 0]), ints(&[0, 1, 0, 0])], o(1)).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::coordinate(4, &[1], o(1)));
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
        assert_eq!(Subspace::zero(4, o(1)).orthocomplement(), Subspace::full(4, o(1)));
    }

    #[test]
    fn invariance_and_restriction() {
        let s = MonomialMatrix::cyclic_shift(3, o(1)).to_dense();
        let ones = Subspace::span(3, &[ints(&[1, 1, 1])], o(1)).unwrap();
        assert!(ones.is_invariant(&s));
        assert!(ones.orthocomplement().is_invariant(&s));
        assert!(!Subspace::coordinate(3, &[0], o(1)).is_invariant(&s));
        let r = ones.orthocomplement().restrict(&s).unwrap();
        assert_eq!(r.rows(), 2);
        assert!(r.pow(3).unwrap().is_identity());
    }

    #[test]
    fn preimage() {
        // swap e0 <-> e2 fixing e1, e3
        let z = MonomialMatrix::new(vec![2, 1, 0, 3], vec![0; 4], o(1))
            .unwrap()
            .to_dense();
        let n = Subspace::coordinate(4, &[0, 1], o(1));
        assert_eq!(n.preimage_within(&z, &n).unwrap(), Subspace::coordinate(4, &[1], o(1)));
    }

    #[test]
    fn serde_round_trip() {
        let s = Subspace::span(3, &[ints(&[1, 2, 0])], o(1)).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Subspace>(&j).unwrap(), s);
        assert!(serde_json::from_str::<Subspace>(r#"{"n":2,"dim":2,"basis":[["1/1"],["2/1"]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn complement_dimensions(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 5), 0..5)) {
            let s = Subspace::span(5, &rows.iter().map(|r| ints(r)).collect::<Vec<_>>(), o(1)).unwrap();
            let c = s.orthocomplement();
            prop_assert_eq!(s.dim() + c.dim(), 5);
            prop_assert_eq!(s.intersect(&c).unwrap().dim(), 0);
            prop_assert_eq!(c.orthocomplement(), s.clone());
            prop_assert_eq!(s.annihilator().annihilator(), s);
        }
    }
}
