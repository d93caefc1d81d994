use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, RootOrder};
use crate::error::{Error, Result};

/// Rectangular matrix over `Q(ζ_m)`; every entry is stored at the matrix's
/// common order.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    order: RootOrder,
    data: Vec<CycNum>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize, order: RootOrder) -> Self {
        DenseMatrix {
            rows,
            cols,
            order,
            data: vec![CycNum::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: RootOrder) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.data[i * n + i] = CycNum::one(order);
        }
        m
    }

    /// Matrix unit `E_ij` (0-based) of size `n`.
    pub fn unit(n: usize, i: usize, j: usize, order: RootOrder) -> Self {
        let mut m = Self::zeros(n, n, order);
        m.data[i * n + j] = CycNum::one(order);
        m
    }

    /// Builds a matrix from rows, lifting all entries to a common order.
    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("ragged rows"));
        }
        let mut order = RootOrder::ONE;
        for v in rows.iter().flatten() {
            order = order.lcm(v.order())?;
        }
        let data = rows
            .into_iter()
            .flatten()
            .map(|v| v.lift(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            order,
            data,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        order: RootOrder,
        mut f: impl FnMut(usize, usize) -> CycNum,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            out.push((0..cols).map(|j| f(i, j)).collect());
        }
        let mut m = Self::from_rows(out)?;
        if m.rows == 0 || m.cols == 0 {
            m = Self::zeros(rows, cols, order);
        }
        m.lift(m.order.lcm(order)?)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn order(&self) -> RootOrder {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    /// Sets an entry; the value must live in a subfield of the matrix's field.
    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        let v = v.lift(self.order).expect("entry order must divide the matrix order");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn lift(&self, target: RootOrder) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|v| v.lift(target)).collect::<Result<Vec<_>>>()?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            order: target,
            data,
        })
    }

    /// Lifts both operands to a common order.
    pub fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let o = a.order.lcm(b.order)?;
        Ok((a.lift(o)?, b.lift(o)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.order != other.order {
            let (a, b) = Self::unify(self, other)?;
            return a.mul(&b);
        }
        let mut out = Self::zeros(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.order != other.order {
            let (a, b) = Self::unify(self, other)?;
            return a.zip_with(&b, f);
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &CycNum) -> Result<Self> {
        let order = self.order.lcm(c.order())?;
        let m = self.lift(order)?;
        let c = c.lift(order)?;
        let data = m.data.iter().map(|v| v * &c).collect();
        Ok(DenseMatrix { data, ..m })
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNum::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_scalar(&self) -> bool {
        self.is_square() && self.is_diagonal() && (1..self.rows).all(|i| self.get(i, i) == self.get(0, 0))
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[CycNum]) -> Result<Vec<CycNum>> {
        if v.len() != self.cols {
            return Err(Error::shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let col = DenseMatrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect())?;
        let col = if self.cols == 0 {
            Self::zeros(0, 1, self.order)
        } else {
            col
        };
        let r = self.mul(&col)?;
        Ok(r.data)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("power of a non-square matrix"));
        }
        let mut acc = Self::identity(self.rows, self.order);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::unify(self, other)?;
        let mut out = Self::zeros(a.rows + b.rows, a.cols + b.cols, a.order);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.data[i * out.cols + j] = a.get(i, j).clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.data[(a.rows + i) * out.cols + a.cols + j] = b.get(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Submatrix of the listed rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len(), self.order);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// In-place elimination. Rows are normalized so pivots are 1; with
    /// `reduce` the entries above each pivot are cleared as well. Returns
    /// the pivot columns; the nonzero rows are the first `pivots.len()`.
    fn eliminate(&mut self, reduce: bool) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // Among nonzero candidates prefer the sparsest (cheapest inverse),
            // first index on ties.
            let Some(p) = (r..rows)
                .filter(|&i| !self.data[i * cols + c].is_zero())
                .min_by_key(|&i| self.data[i * cols + c].weight())
            else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.data[r * cols + c].inv().expect("pivot is nonzero");
            for j in c..cols {
                let idx = r * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            let targets: Vec<usize> = if reduce {
                (0..rows).filter(|&i| i != r).collect()
            } else {
                (r + 1..rows).collect()
            };
            for i in targets {
                let f = self.data[i * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let pv = &self.data[r * cols + j];
                    if pv.is_zero() {
                        continue;
                    }
                    let d = &f * pv;
                    let idx = i * cols + j;
                    self.data[idx] = &self.data[idx] - &d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : Mx = 0}`, one vector per free
    /// column (in increasing order) with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        let (rr, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![CycNum::zero(self.order); self.cols];
            v[free] = CycNum::one(self.order);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rr.get(row, free);
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n, self.order);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = CycNum::one(self.order);
        }
        let (rr, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        Ok(rr.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// `rank(XY - YX)`.
    pub fn commutator_rank(&self, other: &Self) -> Result<usize> {
        Ok(self.mul(other)?.sub(&other.mul(self)?)?.rank())
    }

    /// True when `M* M = I`.
    pub fn is_unitary(&self) -> bool {
        self.is_square()
            && self
                .conj_transpose()
                .mul(self)
                .map(|p| p.is_identity())
                .unwrap_or(false)
    }
}

impl Hash for DenseMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        for v in &self.data {
            v.hash_canonical(state);
        }
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct DenseRepr {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    order: Option<u32>,
    #[serde(default)]
    kind: Option<String>,
    entries: Vec<Vec<CycNum>>,
}

impl Serialize for DenseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DenseRepr {
            n: Some(self.rows),
            order: Some(self.order.get()),
            kind: Some("dense".into()),
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DenseRepr::deserialize(d)?;
        if let Some(k) = &r.kind {
            if k != "dense" {
                return Err(D::Error::custom(format!("expected kind \"dense\", got {k:?}")));
            }
        }
        if let Some(n) = r.n {
            if r.entries.len() != n {
                return Err(D::Error::custom(format!("n = {n} but {} rows given", r.entries.len())));
            }
        }
        let m = DenseMatrix::from_rows(r.entries).map_err(D::Error::custom)?;
        match r.order {
            Some(o) => {
                let o = RootOrder::new(o).map_err(D::Error::custom)?;
                let target = m.order.lcm(o).map_err(D::Error::custom)?;
                m.lift(target).map_err(D::Error::custom)
            }
            None => Ok(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::MonomialMatrix;
    use proptest::prelude::*;

    fn ord(m: u32) -> RootOrder {
        RootOrder::new(m).unwrap()
    }

    fn int_matrix(rows: &[&[i64]]) -> DenseMatrix {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| CycNum::from_int(v, RootOrder::ONE)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(DenseMatrix::identity(4, ord(1)).rank(), 4);
        assert_eq!(DenseMatrix::zeros(3, 5, ord(3)).rank(), 0);
    }

    #[test]
    fn matrix_unit_commutator() {
        let e12 = DenseMatrix::unit(2, 0, 1, ord(1));
        let e21 = DenseMatrix::unit(2, 1, 0, ord(1));
        let c = e12.mul(&e21).unwrap().sub(&e21.mul(&e12).unwrap()).unwrap();
        let oracle = int_matrix(&[&[1, 0], &[0, -1]]);
        assert_eq!(c, oracle);
        assert_eq!(c.rank(), 2);
    }

    #[test]
    fn diagonal_cube_roots_against_shift() {
        let a0 = MonomialMatrix::diagonal(vec![1, 2, 0], ord(3)).to_dense();
        let s = MonomialMatrix::cyclic_shift(3, ord(3)).to_dense();
        assert_eq!(a0.commutator_rank(&s).unwrap(), 3);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).unwrap().iter().all(CycNum::is_zero));
    }

    #[test]
    fn cyclotomic_dependence_is_exact() {
        // rows (1, ζ3) and (ζ3², 1) are dependent: ζ3² · (1, ζ3) = (ζ3², 1)
        let z = |k| CycNum::root_of_unity(k, ord(3));
        let m = DenseMatrix::from_rows(vec![vec![z(0), z(1)], vec![z(2), z(0)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let m2 = DenseMatrix::from_rows(vec![vec![z(0), z(1)], vec![z(1), z(0)]]).unwrap();
        assert_eq!(m2.rank(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = int_matrix(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(int_matrix(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn mixed_orders_lift() {
        let a = MonomialMatrix::diagonal(vec![1, 0], ord(2)).to_dense();
        let b = MonomialMatrix::diagonal(vec![1, 0], ord(3)).to_dense();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.order(), ord(6));
        assert_eq!(p.get(0, 0).root_exponent(), Some(5));
    }

    #[test]
    fn serde_round_trip() {
        let m = MonomialMatrix::new(vec![1, 0], vec![1, 2], ord(3)).unwrap().to_dense();
        let s = serde_json::to_string(&m).unwrap();
        let back: DenseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let roots: DenseMatrix =
            serde_json::from_str(r#"{"entries": [[{"root":0,"order":1}, 0], [0, {"root":1,"order":4}]]}"#).unwrap();
        assert_eq!(roots.order(), ord(4));
        assert_eq!(roots.get(1, 1), &CycNum::root_of_unity(1, ord(4)));
    }

    fn arb_dense(n: usize, m: u32) -> impl Strategy<Value = DenseMatrix> {
        prop::collection::vec(prop::collection::vec(-2i64..3, m as usize), n * n).prop_map(move |cs| {
            let o = RootOrder::new(m).unwrap();
            let rows = cs
                .chunks(n)
                .map(|row| {
                    row.iter()
                        .map(|c| {
                            let coeffs: Vec<_> = c
                                .iter()
                                .map(|&v| num_rational::BigRational::from_integer(v.into()))
                                .collect();
                            CycNum::from_coeffs(&coeffs, o)
                        })
                        .collect()
                })
                .collect();
            DenseMatrix::from_rows(rows).unwrap().lift(o).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_invariant_under_adjoint(m in arb_dense(3, 3)) {
            prop_assert_eq!(m.rank(), m.conj_transpose().rank());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_invariant_under_permutation(m in arb_dense(3, 4), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
            let permuted = m.select(&perm, &[2, 0, 1]);
            prop_assert_eq!(m.rank(), permuted.rank());
        }

        #[test]
        fn rank_nullity(m in arb_dense(4, 3)) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), 4);
            for v in &k {
                prop_assert!(m.apply(v).unwrap().iter().all(CycNum::is_zero));
            }
        }

        #[test]
        fn low_rank_products(a in arb_dense(3, 3), b in arb_dense(3, 3)) {
            let p = a.mul(&b).unwrap();
            prop_assert!(p.rank() <= a.rank().min(b.rank()));
        }
    }
}
