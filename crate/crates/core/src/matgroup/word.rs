use serde::{Deserialize, Serialize};

use crate::cyclotomic::RootOrder;
use crate::error::{Error, Result};
use crate::matgroup::MonomialMatrix;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The generators `(S, A)` of `G(p, q, A)`: `S` is the `p`-cycle sending
/// `e_j` to `e_{j+1}` and `A = diag(ζ_q^{a_0}, …, ζ_q^{a_{p-1}})`.
pub fn make_gpqa_generators(p: u32, q: u32, a_exps: &[u32]) -> Result<(MonomialMatrix, MonomialMatrix)> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    if a_exps.len() != p as usize {
        return Err(Error::input(format!(
            "A has {} entries, expected p = {p}",
            a_exps.len()
        )));
    }
    let reduced: Vec<u32> = a_exps.iter().map(|e| e % q).collect();
    if reduced.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::ScalarDiagonal(reduced));
    }
    let order = RootOrder::new(q)?;
    Ok((
        MonomialMatrix::cyclic_shift(p as usize, order),
        MonomialMatrix::diagonal(reduced, order),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    S,
    A,
}

/// A word `g_1^{k_1} g_2^{k_2} ⋯` in the two generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<(Generator, i64)>);

impl GroupWord {
    pub fn evaluate(&self, s: &MonomialMatrix, a: &MonomialMatrix) -> Result<MonomialMatrix> {
        let mut acc = MonomialMatrix::identity(s.dim(), s.order());
        for &(g, k) in &self.0 {
            let base = match g {
                Generator::S => s,
                Generator::A => a,
            };
            acc = acc.mul(&base.pow(k))?;
        }
        Ok(acc)
    }
}

/// Rewrites a word as `D · S^γ` with `D` diagonal.
///
/// Moving every `S` power to the right turns each `A^α` into the conjugate
/// `S^β A^α S^{-β}`, a rotation of `A`, which is absorbed into `D`.
pub fn normalize_word(w: &GroupWord, s: &MonomialMatrix, a: &MonomialMatrix) -> Result<(MonomialMatrix, u32)> {
    let p = s.dim();
    if !a.is_diagonal() {
        return Err(Error::input("A must be diagonal"));
    }
    if a.dim() != p || a.order() != s.order() {
        return Err(Error::shape("generators differ in dimension or order"));
    }
    let m = s.order().get();
    let mut d = vec![0u32; p];
    let mut gamma: usize = 0;
    for &(g, k) in &w.0 {
        match g {
            Generator::S => gamma = (gamma as i64 + k).rem_euclid(p as i64) as usize,
            Generator::A => {
                // S^γ A^k S^{-γ} has entry k·a_{j-γ} at position j
                let k = k.rem_euclid(m as i64) as u64;
                for (j, dj) in d.iter_mut().enumerate() {
                    let src = (j + p - gamma) % p;
                    *dj = ((*dj as u64 + k * a.exps()[src] as u64) % m as u64) as u32;
                }
            }
        }
    }
    Ok((MonomialMatrix::diagonal(d, s.order()), gamma as u32))
}

/// Splits an element whose permutation is a power of the cyclic shift as
/// `D · S^γ`; `None` otherwise.
pub fn factor_shift(x: &MonomialMatrix) -> Option<(MonomialMatrix, u32)> {
    let p = x.dim();
    if p == 0 {
        return Some((x.clone(), 0));
    }
    let gamma = x.perm()[0] as usize;
    if x.perm().iter().enumerate().any(|(j, &s)| s as usize != (j + gamma) % p) {
        return None;
    }
    let s = MonomialMatrix::cyclic_shift(p, x.order());
    let d = x.mul_unchecked(&s.pow(-(gamma as i64)));
    Some((d, gamma as u32))
}
