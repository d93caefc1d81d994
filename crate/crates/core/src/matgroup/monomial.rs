use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, RootOrder};
use crate::error::{Error, Result};
use crate::matgroup::dense::DenseMatrix;

/// Generalized permutation matrix whose nonzero entries are `m`-th roots of
/// unity.
///
/// Column `j` has the single entry `ζ_m^{exps[j]}` in row `perm[j]`, so the
/// matrix sends `e_j` to `ζ_m^{exps[j]} e_{perm[j]}`. Indices are 0-based.
///
/// The derived ordering (order, then permutation, then exponents) is the
/// canonical order used to pick reproducible witnesses.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMatrix {
    order: RootOrder,
    perm: Vec<u32>,
    exps: Vec<u32>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<u32>, exps: Vec<u32>, order: RootOrder) -> Result<Self> {
        let n = perm.len();
        if exps.len() != n {
            return Err(Error::shape(format!(
                "permutation has length {n} but exponent vector has length {}",
                exps.len()
            )));
        }
        let mut seen = vec![false; n];
        for &s in &perm {
            let s = s as usize;
            if s >= n || seen[s] {
                return Err(Error::input(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[s] = true;
        }
        let m = order.get();
        let exps = exps.into_iter().map(|e| e % m).collect();
        Ok(MonomialMatrix { order, perm, exps })
    }

    pub fn identity(n: usize, order: RootOrder) -> Self {
        MonomialMatrix {
            order,
            perm: (0..n as u32).collect(),
            exps: vec![0; n],
        }
    }

    /// Diagonal matrix `diag(ζ^{e_0}, …, ζ^{e_{n-1}})`.
    pub fn diagonal(exps: Vec<u32>, order: RootOrder) -> Self {
        let n = exps.len();
        let m = order.get();
        MonomialMatrix {
            order,
            perm: (0..n as u32).collect(),
            exps: exps.into_iter().map(|e| e % m).collect(),
        }
    }

    /// The cyclic shift with ones at (1-based) positions (2,1), (3,2), …,
    /// (1,n): it sends `e_j` to `e_{j+1 mod n}`.
    pub fn cyclic_shift(n: usize, order: RootOrder) -> Self {
        MonomialMatrix {
            order,
            perm: (0..n as u32).map(|j| (j + 1) % n as u32).collect(),
            exps: vec![0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn order(&self) -> RootOrder {
        self.order
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &s)| s as usize == j)
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.exps.iter().all(|&e| e == 0)
    }

    /// Diagonal with all entries equal.
    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.exps.windows(2).all(|w| w[0] == w[1])
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::shape(format!("dimension {} vs {}", self.dim(), other.dim())));
        }
        if self.order != other.order {
            return Err(Error::shape(format!("root order {} vs {}", self.order, other.order)));
        }
        Ok(())
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.order.get();
        let n = self.dim();
        let mut perm = Vec::with_capacity(n);
        let mut exps = Vec::with_capacity(n);
        for j in 0..n {
            let mid = other.perm[j] as usize;
            perm.push(self.perm[mid]);
            exps.push((other.exps[j] + self.exps[mid]) % m);
        }
        MonomialMatrix {
            order: self.order,
            perm,
            exps,
        }
    }

    pub fn inverse(&self) -> Self {
        let m = self.order.get();
        let n = self.dim();
        let mut perm = vec![0u32; n];
        let mut exps = vec![0u32; n];
        for j in 0..n {
            let i = self.perm[j] as usize;
            perm[i] = j as u32;
            exps[i] = (m - self.exps[j]) % m;
        }
        MonomialMatrix {
            order: self.order,
            perm,
            exps,
        }
    }

    /// Conjugate transpose, computed entrywise (it coincides with the
    /// inverse because the matrix is unitary).
    pub fn conj_transpose(&self) -> Self {
        let m = self.order.get();
        let n = self.dim();
        // entry (perm[j], j) = ζ^e  ->  entry (j, perm[j]) = ζ^{-e}
        let mut perm = vec![0u32; n];
        let mut exps = vec![0u32; n];
        for (j, (&row, &e)) in self.perm.iter().zip(&self.exps).enumerate() {
            perm[row as usize] = j as u32;
            exps[row as usize] = (m - e) % m;
        }
        MonomialMatrix {
            order: self.order,
            perm,
            exps,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = MonomialMatrix::identity(self.dim(), self.order);
        for _ in 0..k.unsigned_abs() {
            acc = base.mul_unchecked(&acc);
        }
        acc
    }

    /// Re-expresses the entries as roots of a multiple of the order.
    pub fn lift(&self, target: RootOrder) -> Result<Self> {
        if !target.get().is_multiple_of(self.order.get()) {
            return Err(Error::shape(format!("cannot lift order {} to {}", self.order, target)));
        }
        let f = target.get() / self.order.get();
        Ok(MonomialMatrix {
            order: target,
            perm: self.perm.clone(),
            exps: self.exps.iter().map(|e| e * f).collect(),
        })
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::shape("direct sum of different root orders"));
        }
        let off = self.dim() as u32;
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|&s| s + off));
        let mut exps = self.exps.clone();
        exps.extend_from_slice(&other.exps);
        Ok(MonomialMatrix {
            order: self.order,
            perm,
            exps,
        })
    }

    /// `XYX⁻¹Y⁻¹` computed without intermediate allocations beyond the result.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let xy = self.mul_unchecked(other);
        let yx = other.mul_unchecked(self);
        Ok(xy.mul_unchecked(&yx.inverse()))
    }

    /// Determinant as `(sign of the permutation, exponent of ζ)`.
    pub fn determinant(&self) -> (i8, u32) {
        let n = self.dim();
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        let m = self.order.get() as u64;
        let e = (self.exps.iter().map(|&e| e as u64).sum::<u64>() % m) as u32;
        (if transpositions.is_multiple_of(2) { 1 } else { -1 }, e)
    }

    pub fn determinant_value(&self) -> CycNum {
        let (sign, e) = self.determinant();
        let z = CycNum::root_of_unity(e as i64, self.order);
        if sign < 0 {
            -z
        } else {
            z
        }
    }

    /// `rank(self - I)`.
    ///
    /// On a cycle of length `L` whose entries multiply to `θ`, the block of
    /// `self - I` has rank `L - 1` if `θ = 1` and `L` otherwise.
    pub fn rank_minus_identity(&self) -> usize {
        rank_minus_identity_raw(&self.perm, &self.exps, self.order.get())
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length");
        let mut out = vec![CycNum::zero(self.order); n];
        for j in 0..n {
            let w = if self.exps[j] == 0 {
                v[j].clone()
            } else {
                &v[j] * &CycNum::root_of_unity(self.exps[j] as i64, self.order)
            };
            out[self.perm[j] as usize] = w;
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut d = DenseMatrix::zeros(n, n, self.order);
        for j in 0..n {
            d.set(
                self.perm[j] as usize,
                j,
                CycNum::root_of_unity(self.exps[j] as i64, self.order),
            );
        }
        d
    }

    /// Recognizes a dense matrix as monomial with root-of-unity entries of
    /// the matrix's order.
    pub fn from_dense(d: &DenseMatrix) -> Option<Self> {
        if d.rows() != d.cols() {
            return None;
        }
        let n = d.rows();
        let mut perm = vec![0u32; n];
        let mut exps = vec![0u32; n];
        for j in 0..n {
            let mut found = None;
            for i in 0..n {
                if !d.get(i, j).is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(i);
                }
            }
            let i = found?;
            perm[j] = i as u32;
            exps[j] = d.get(i, j).root_exponent()?;
        }
        MonomialMatrix::new(perm, exps, d.order()).ok()
    }
}

pub(crate) fn rank_minus_identity_raw(perm: &[u32], exps: &[u32], m: u32) -> usize {
    let n = perm.len();
    let mut seen = [false; 64];
    let mut seen_vec;
    let seen: &mut [bool] = if n <= 64 {
        &mut seen[..n]
    } else {
        seen_vec = vec![false; n];
        &mut seen_vec
    };
    let mut rank = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut theta = 0u64;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            theta += exps[j] as u64;
            j = perm[j] as usize;
            len += 1;
        }
        rank += if theta.is_multiple_of(m as u64) { len - 1 } else { len };
    }
    rank
}

/// `rank(XYX⁻¹Y⁻¹ - I)` for two monomial matrices of equal shape, computed on
/// stack buffers; this is the kernel of exhaustive pair scans.
pub fn commutator_rank_monomial(x: &MonomialMatrix, y: &MonomialMatrix) -> usize {
    let n = x.dim();
    if n > 64 {
        return x.commutator(y).expect("shape checked by caller").rank_minus_identity();
    }
    let m = x.order.get();
    // P = XY, Q = YX; the commutator is P Q⁻¹.
    let mut p_perm = [0u32; 64];
    let mut p_exp = [0u32; 64];
    let mut q_perm = [0u32; 64];
    let mut q_exp = [0u32; 64];
    for j in 0..n {
        let a = y.perm[j] as usize;
        p_perm[j] = x.perm[a];
        p_exp[j] = (y.exps[j] + x.exps[a]) % m;
        let b = x.perm[j] as usize;
        q_perm[j] = y.perm[b];
        q_exp[j] = (x.exps[j] + y.exps[b]) % m;
    }
    // K sends e_{q_perm[j]} to ζ^{p_exp[j] - q_exp[j]} e_{p_perm[j]}.
    let mut k_perm = [0u32; 64];
    let mut k_exp = [0u32; 64];
    for j in 0..n {
        let src = q_perm[j] as usize;
        k_perm[src] = p_perm[j];
        k_exp[src] = (p_exp[j] + m - q_exp[j]) % m;
    }
    rank_minus_identity_raw(&k_perm[..n], &k_exp[..n], m)
}

impl fmt::Debug for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_diagonal() {
            write!(f, "diag{:?}/{}", self.exps, self.order)
        } else {
            write!(f, "mono(perm={:?}, exps={:?})/{}", self.perm, self.exps, self.order)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    n: usize,
    order: u32,
    kind: String,
    perm: Vec<u32>,
    exps: Vec<u32>,
}

impl Serialize for MonomialMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialRepr {
            n: self.dim(),
            order: self.order.get(),
            kind: "monomial".into(),
            perm: self.perm.clone(),
            exps: self.exps.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MonomialRepr::deserialize(d)?;
        if r.kind != "monomial" {
            return Err(D::Error::custom(format!(
                "expected kind \"monomial\", got {:?}",
                r.kind
            )));
        }
        if r.perm.len() != r.n {
            return Err(D::Error::custom("perm length differs from n"));
        }
        let order = RootOrder::new(r.order).map_err(D::Error::custom)?;
        MonomialMatrix::new(r.perm, r.exps, order).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ord(m: u32) -> RootOrder {
        RootOrder::new(m).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let x = MonomialMatrix::new(vec![2, 0, 1], vec![1, 0, 3], ord(4)).unwrap();
        let i = MonomialMatrix::identity(3, ord(4));
        assert_eq!(x.mul(&i).unwrap(), x);
        assert_eq!(i.mul(&x).unwrap(), x);
        assert_eq!(i.inverse(), i);
    }

    #[test]
    fn shift_conjugation_rotates_diagonal() {
        let s = MonomialMatrix::cyclic_shift(4, ord(5));
        let d = MonomialMatrix::diagonal(vec![1, 2, 3, 4], ord(5));
        let c = s.mul(&d).unwrap().mul(&s.inverse()).unwrap();
        assert_eq!(c, MonomialMatrix::diagonal(vec![4, 1, 2, 3], ord(5)));
    }

    #[test]
    fn shift_squared_for_p3() {
        let s = MonomialMatrix::cyclic_shift(3, ord(1));
        let s2 = s.mul(&s).unwrap();
        // 1-based: 1→3, 2→1, 3→2
        assert_eq!(s2.perm(), &[2, 0, 1]);
        assert_eq!(s2.to_dense(), s.to_dense().mul(&s.to_dense()).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let d = MonomialMatrix::diagonal(vec![1, 2], ord(3));
        assert_eq!(d.inverse(), MonomialMatrix::diagonal(vec![2, 1], ord(3)));
        let s = MonomialMatrix::cyclic_shift(5, ord(1));
        assert_eq!(s.inverse(), s.pow(4));
        assert!(s.to_dense().mul(&s.pow(4).to_dense()).unwrap().is_identity());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = MonomialMatrix::identity(2, ord(2));
        let b = MonomialMatrix::identity(3, ord(2));
        let c = MonomialMatrix::identity(2, ord(3));
        assert!(matches!(a.mul(&b), Err(Error::Shape(_))));
        assert!(matches!(a.mul(&c), Err(Error::Shape(_))));
        assert!(MonomialMatrix::new(vec![0, 0], vec![0, 0], ord(2)).is_err());
    }

    #[test]
    fn determinant_of_shift() {
        assert_eq!(MonomialMatrix::cyclic_shift(3, ord(1)).determinant(), (1, 0));
        assert_eq!(MonomialMatrix::cyclic_shift(2, ord(1)).determinant(), (-1, 0));
        assert_eq!(MonomialMatrix::diagonal(vec![1, 1, 0], ord(2)).determinant(), (1, 0));
    }

    #[test]
    fn serde_round_trip() {
        let x = MonomialMatrix::new(vec![1, 2, 0], vec![0, 1, 1], ord(2)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"order":2,"kind":"monomial","perm":[1,2,0],"exps":[0,1,1]}"#
        );
        assert_eq!(serde_json::from_str::<MonomialMatrix>(&s).unwrap(), x);
    }

    fn arb_mono(n: usize, m: u32) -> impl Strategy<Value = MonomialMatrix> {
        (
            Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(0..m, n),
        )
            .prop_map(move |(perm, exps)| MonomialMatrix::new(perm, exps, RootOrder::new(m).unwrap()).unwrap())
    }

    proptest! {
        #[test]
        fn product_matches_dense(x in arb_mono(5, 6), y in arb_mono(5, 6)) {
            prop_assert_eq!(x.mul(&y).unwrap().to_dense(), x.to_dense().mul(&y.to_dense()).unwrap());
        }

        #[test]
        fn conj_transpose_is_inverse(x in arb_mono(6, 4)) {
            prop_assert_eq!(x.conj_transpose(), x.inverse());
            prop_assert_eq!(x.to_dense().conj_transpose(), x.conj_transpose().to_dense());
            prop_assert!(x.mul(&x.inverse()).unwrap().is_identity());
            prop_assert_eq!(MonomialMatrix::from_dense(&x.to_dense()), Some(x.clone()));
        }

        #[test]
        fn rank_formula_matches_elimination(x in arb_mono(6, 6)) {
            let dense = x.to_dense().sub(&DenseMatrix::identity(6, x.order())).unwrap();
            prop_assert_eq!(x.rank_minus_identity(), dense.rank());
        }

        #[test]
        fn commutator_kernel_matches_products(x in arb_mono(5, 4), y in arb_mono(5, 4)) {
            let k = x.commutator(&y).unwrap();
            prop_assert_eq!(commutator_rank_monomial(&x, &y), k.rank_minus_identity());
            let xy = x.to_dense().mul(&y.to_dense()).unwrap();
            let yx = y.to_dense().mul(&x.to_dense()).unwrap();
            prop_assert_eq!(commutator_rank_monomial(&x, &y), xy.sub(&yx).unwrap().rank());
        }

        #[test]
        fn determinant_matches_product_of_entries(x in arb_mono(4, 6), y in arb_mono(4, 6)) {
            let dx = x.determinant_value();
            let dy = y.determinant_value();
            prop_assert_eq!(x.mul(&y).unwrap().determinant_value(), &dx * &dy);
        }
    }
}
