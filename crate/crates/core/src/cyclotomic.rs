//! Exact arithmetic in the cyclotomic fields `Q(ζ_m)`.
//!
//! A [`CycNum`] is stored as a polynomial in `ζ_m` of degree below `φ(m)`
//! with integer numerators over one positive common denominator. The
//! polynomial is always reduced modulo the cyclotomic polynomial `Φ_m`, so
//! the stored form is unique and the zero test is exact.
//!
//! Values of different orders can be mixed freely: both operands are lifted
//! to the least common multiple of their orders first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported root-of-unity order.
pub const MAX_ORDER: u32 = 5040;

/// Order `m` of the primitive root of unity `ζ_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct RootOrder(u32);

impl RootOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_ORDER {
            return Err(Error::InvalidOrder(m as u64));
        }
        Ok(RootOrder(m))
    }

    /// The trivial order; `Q(ζ_1) = Q`.
    pub const ONE: RootOrder = RootOrder(1);

    pub fn get(self) -> u32 {
        self.0
    }

    /// Degree of `Q(ζ_m)` over `Q`.
    pub fn phi(self) -> usize {
        tables(self).phi
    }

    pub fn lcm(self, other: RootOrder) -> Result<RootOrder> {
        RootOrder::new(self.0.lcm(&other.0))
    }
}

impl TryFrom<u32> for RootOrder {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        RootOrder::new(m)
    }
}

impl From<RootOrder> for u32 {
    fn from(m: RootOrder) -> u32 {
        m.0
    }
}

impl fmt::Display for RootOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// ---------------------------------------------------------------------------
// Per-order tables
// ---------------------------------------------------------------------------

struct OrderTables {
    phi: usize,
    /// `ζ^k mod Φ_m` for `k` in `0..m`, each of length `phi`.
    powers: Vec<Vec<i64>>,
}

fn table_cache() -> &'static RwLock<HashMap<u32, Arc<OrderTables>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<OrderTables>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn tables(m: RootOrder) -> Arc<OrderTables> {
    if let Some(t) = table_cache().read().expect("order cache poisoned").get(&m.0) {
        return Arc::clone(t);
    }
    let built = Arc::new(build_tables(m.0));
    let mut cache = table_cache().write().expect("order cache poisoned");
    Arc::clone(cache.entry(m.0).or_insert(built))
}

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1
    let mut quotient = vec![0i64; m as usize + 1];
    quotient[0] = -1;
    quotient[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            quotient = exact_monic_div(&quotient, &cyclotomic_polynomial(d));
        }
    }
    quotient
}

fn exact_monic_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] = rem[i + j]
                    .checked_sub(c.checked_mul(d).expect("cyclotomic coefficient overflow"))
                    .expect("cyclotomic coefficient overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    q
}

fn build_tables(m: u32) -> OrderTables {
    let cyclo = cyclotomic_polynomial(m);
    let phi = cyclo.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce by the monic Φ_m
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for j in 0..phi {
                next[j] = next[j]
                    .checked_sub(top.checked_mul(cyclo[j]).expect("power table overflow"))
                    .expect("power table overflow");
            }
        }
        cur = next;
    }
    OrderTables { phi, powers }
}

// ---------------------------------------------------------------------------
// CycNum
// ---------------------------------------------------------------------------

/// An exact element of `Q(ζ_m)`.
#[derive(Clone)]
pub struct CycNum {
    order: RootOrder,
    /// Numerators of the coefficients of `ζ^0 .. ζ^{φ(m)-1}`.
    num: Vec<BigInt>,
    /// Positive common denominator, coprime to the content of `num`.
    den: BigInt,
}

impl CycNum {
    pub fn zero(m: RootOrder) -> Self {
        CycNum {
            order: m,
            num: vec![BigInt::zero(); m.phi()],
            den: BigInt::one(),
        }
    }

    pub fn one(m: RootOrder) -> Self {
        Self::from_int(1, m)
    }

    pub fn from_int(v: i64, m: RootOrder) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_rational(q: &BigRational, m: RootOrder) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z.normalize();
        z
    }

    /// `ζ_m^k`, with `k` taken modulo `m`.
    pub fn root_of_unity(k: i64, m: RootOrder) -> Self {
        let t = tables(m);
        let idx = k.rem_euclid(m.0 as i64) as usize;
        CycNum {
            order: m,
            num: t.powers[idx].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    /// Builds `Σ c_k ζ_m^k` from an arbitrary-length coefficient list
    /// (indices taken mod `m`) and reduces it to canonical form.
    pub fn from_coeffs(coeffs: &[BigRational], m: RootOrder) -> Self {
        let t = tables(m);
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            let row = &t.powers[k % m.0 as usize];
            for (acc, &p) in num.iter_mut().zip(row) {
                if p != 0 {
                    *acc += &scaled * p;
                }
            }
        }
        let mut z = CycNum { order: m, num, den };
        z.normalize();
        z
    }

    pub fn order(&self) -> RootOrder {
        self.order
    }

    /// Exact zero test: the stored form is reduced modulo `Φ_m`.
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the value lies in `Q` (only the constant coefficient is set).
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Coefficients of `ζ^0 .. ζ^{m-1}` in canonical form (entries at
    /// `φ(m)..m` are zero).
    pub fn coeffs(&self) -> Vec<BigRational> {
        let m = self.order.0 as usize;
        (0..m)
            .map(|k| match self.num.get(k) {
                Some(n) => BigRational::new(n.clone(), self.den.clone()),
                None => BigRational::zero(),
            })
            .collect()
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if !n.is_zero() {
                g = g.gcd(n);
                if g.is_one() {
                    break;
                }
            }
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for n in &mut self.num {
                if !n.is_zero() {
                    *n /= &g;
                }
            }
            self.den /= &g;
        }
    }

    /// Re-expresses the value in `Q(ζ_M)` for a multiple `M` of the order.
    pub fn lift(&self, target: RootOrder) -> Result<CycNum> {
        if target == self.order {
            return Ok(self.clone());
        }
        if !target.0.is_multiple_of(self.order.0) {
            return Err(Error::shape(format!("cannot lift order {} to {}", self.order, target)));
        }
        let factor = (target.0 / self.order.0) as usize;
        let t = tables(target);
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[(k * factor) % target.0 as usize];
            for (acc, &p) in num.iter_mut().zip(row) {
                if p != 0 {
                    *acc += c * p;
                }
            }
        }
        let mut z = CycNum {
            order: target,
            num,
            den: self.den.clone(),
        };
        z.normalize();
        Ok(z)
    }

    fn unify(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let m = a.order.lcm(b.order).expect("combined root order exceeds MAX_ORDER");
        (
            a.lift(m).expect("lcm is a multiple"),
            b.lift(m).expect("lcm is a multiple"),
        )
    }

    fn add_same(&self, other: &CycNum, negate: bool) -> CycNum {
        debug_assert_eq!(self.order, other.order);
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect();
            (num, &self.den * &other.den)
        };
        let mut z = CycNum {
            order: self.order,
            num,
            den,
        };
        z.normalize();
        z
    }

    fn mul_same(&self, other: &CycNum) -> CycNum {
        debug_assert_eq!(self.order, other.order);
        if self.is_zero() || other.is_zero() {
            return CycNum::zero(self.order);
        }
        let t = tables(self.order);
        let phi = t.phi;
        let m = self.order.0 as usize;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..phi).collect();
        for (off, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[(phi + off) % m];
            for (acc, &p) in num.iter_mut().zip(row) {
                if p != 0 {
                    *acc += &c * p;
                }
            }
        }
        let mut z = CycNum {
            order: self.order,
            num,
            den: &self.den * &other.den,
        };
        z.normalize();
        z
    }

    /// Complex conjugate: `ζ^k ↦ ζ^{-k}`.
    pub fn conj(&self) -> CycNum {
        let t = tables(self.order);
        let m = self.order.0 as usize;
        let mut num = vec![BigInt::zero(); t.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &t.powers[(m - k) % m];
            for (acc, &p) in num.iter_mut().zip(row) {
                if p != 0 {
                    *acc += c * p;
                }
            }
        }
        let mut z = CycNum {
            order: self.order,
            num,
            den: self.den.clone(),
        };
        z.normalize();
        z
    }

    /// Multiplicative inverse.
    ///
    /// Monomials `c ζ^k` are inverted directly; anything else by solving the
    /// `φ(m)`-dimensional rational system `z · x = 1`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nonzero: Vec<usize> = (0..self.num.len()).filter(|&k| !self.num[k].is_zero()).collect();
        if nonzero.len() == 1 {
            let k = nonzero[0];
            let m = self.order.0 as i64;
            let root = CycNum::root_of_unity(m - k as i64, self.order);
            let scale = BigRational::new(self.den.clone(), self.num[k].clone());
            return Ok(root.scale(&scale));
        }
        let t = tables(self.order);
        let phi = t.phi;
        // Column j holds num · ζ^j reduced.
        let mut mat = vec![vec![BigRational::zero(); phi + 1]; phi];
        let int_part = CycNum {
            order: self.order,
            num: self.num.clone(),
            den: BigInt::one(),
        };
        #[allow(clippy::needless_range_loop)]
        for j in 0..phi {
            let col = int_part.mul_same(&CycNum::root_of_unity(j as i64, self.order));
            for (i, v) in col.coeffs().into_iter().take(phi).enumerate() {
                mat[i][j] = v;
            }
        }
        mat[0][phi] = BigRational::from_integer(self.den.clone());
        let sol = solve_rational(mat).ok_or(Error::DivisionByZero)?;
        Ok(CycNum::from_coeffs(&sol, self.order))
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero(self.order);
        }
        let mut z = CycNum {
            order: self.order,
            num: self.num.iter().map(|n| n * q.numer()).collect(),
            den: &self.den * q.denom(),
        };
        z.normalize();
        z
    }

    /// If the value equals `ζ_m^k` for some `k`, returns that `k`.
    pub fn root_exponent(&self) -> Option<u32> {
        if !self.den.is_one() {
            return None;
        }
        let t = tables(self.order);
        t.powers
            .iter()
            .position(|row| row.iter().zip(&self.num).all(|(&p, n)| BigInt::from(p) == *n))
            .map(|k| k as u32)
    }

    /// Number of nonzero stored coefficients; a cheap proxy for the cost of
    /// inverting or multiplying by this value.
    pub fn weight(&self) -> usize {
        self.num.iter().filter(|n| !n.is_zero()).count()
    }

    /// Hashes the canonical representation. Values of equal order hash
    /// equally iff they are equal.
    pub fn hash_canonical<H: std::hash::Hasher>(&self, state: &mut H) {
        use std::hash::Hash;
        self.order.0.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }

    /// Floating-point image under `ζ_m ↦ e^{2πi/m}`; only for diagnostics
    /// and test oracles.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.order.0 as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN) / den;
            let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

/// Solves a square augmented system exactly; `None` if singular.
fn solve_rational(mut a: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                #[allow(clippy::needless_range_loop)]
                for c in col..=n {
                    let d = &a[col][c] * &f;
                    a[r][c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = CycNum::unify(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{q}")?,
                _ if q.is_one() => write!(f, "z{}^{}", self.order, k)?,
                _ => write!(f, "({q})z{}^{}", self.order, k)?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                let f: fn(&CycNum, &CycNum) -> CycNum = $body;
                if self.order == rhs.order {
                    f(self, rhs)
                } else {
                    let (a, b) = CycNum::unify(self, rhs);
                    f(&a, &b)
                }
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_same(b, false));
binop!(Sub, sub, |a, b| a.add_same(b, true));
binop!(Mul, mul, |a, b| a.mul_same(b));

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self.coeffs();
        let mut seq = s.serialize_seq(Some(coeffs.len()))?;
        for c in coeffs {
            seq.serialize_element(&format!("{}/{}", c.numer(), c.denom()))?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycRepr {
    Root { root: i64, order: u32 },
    Coeffs(Vec<CoeffRepr>),
    Scalar(CoeffRepr),
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::input(format!("bad rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match CycRepr::deserialize(d)? {
            CycRepr::Root { root, order } => {
                let m = RootOrder::new(order).map_err(de::Error::custom)?;
                Ok(CycNum::root_of_unity(root, m))
            }
            CycRepr::Scalar(c) => {
                let q = match c {
                    CoeffRepr::Text(t) => parse_rational(&t).map_err(de::Error::custom)?,
                    CoeffRepr::Int(i) => BigRational::from_integer(i.into()),
                };
                Ok(CycNum::from_rational(&q, RootOrder::ONE))
            }
            CycRepr::Coeffs(cs) => {
                let m = RootOrder::new(cs.len() as u32).map_err(de::Error::custom)?;
                let coeffs = cs
                    .iter()
                    .map(|c| match c {
                        CoeffRepr::Text(t) => parse_rational(t),
                        CoeffRepr::Int(i) => Ok(BigRational::from_integer((*i).into())),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map_err(de::Error::custom)?;
                Ok(CycNum::from_coeffs(&coeffs, m))
            }
        }
    }
}
