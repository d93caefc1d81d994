use serde::Serialize;

use crate::engine::group::GroupSet;
use crate::error::{Error, Result};
use crate::matgroup::{is_prime, MonomialMatrix};

/// Explicit commutator of maximal rank in a group with `ρ = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rho2Witness {
    /// Diagonal element with exactly two nontrivial entries, in positions
    /// 0 and 1.
    pub delta: MonomialMatrix,
    /// `Γ` (or `Γ′` when `q = 2`).
    pub gamma: MonomialMatrix,
    /// `Ω = Γ S Γ⁻¹ S⁻¹`.
    pub omega: MonomialMatrix,
    /// `rank(Ω - I)`: `p` when `q > 2`, `p - 1` when `q = 2`.
    pub rank: usize,
}

/// `S^k diag(v) S^{-k}` on exponent vectors: entry `t` moves to `t + k`.
fn rot(v: &[u32], k: usize) -> Vec<u32> {
    let p = v.len();
    (0..p).map(|t| v[(t + p - k % p) % p]).collect()
}

fn add(u: &[u32], v: &[u32], q: u32) -> Vec<u32> {
    u.iter().zip(v).map(|(a, b)| (a + b) % q).collect()
}

fn sub(u: &[u32], v: &[u32], q: u32) -> Vec<u32> {
    u.iter().zip(v).map(|(a, b)| (a + q - b) % q).collect()
}

fn scale(v: &[u32], c: u32, q: u32) -> Vec<u32> {
    v.iter().map(|&a| ((a as u64 * c as u64) % q as u64) as u32).collect()
}

fn support(v: &[u32]) -> Vec<usize> {
    (0..v.len()).filter(|&i| v[i] != 0).collect()
}

fn inv_mod(a: u32, q: u32) -> u32 {
    (1..q)
        .find(|&x| (a as u64 * x as u64) % q as u64 == 1)
        .expect("q is prime and a is nonzero")
}

/// Turns a weight-2 exponent vector into a weight-2 vector supported on
/// `{0, 1}` using only rotations, scalings and differences, so the result
/// lies in any cyclic code containing the input.
pub(crate) fn reduce_gap(v: &[u32], q: u32) -> Result<Vec<u32>> {
    let p = v.len();
    let sup = support(v);
    if sup.len() != 2 {
        return Err(Error::precondition(format!("expected weight 2, got support {sup:?}")));
    }
    let (i, j) = (sup[0], sup[1]);
    // rotate so the support is {0, s} with s <= (p-1)/2
    let mut d = if j - i <= p / 2 { rot(v, p - i) } else { rot(v, p - j) };
    let mut s = support(&d)[1];
    while s > 1 {
        let e1 = d[0];
        let a = (d[s] as u64 * inv_mod(e1, q) as u64 % q as u64) as u32;
        let m = (p - 1) / s;
        let mut delta = d.clone();
        let mut ak = 1u32;
        for k in 1..m {
            ak = (ak as u64 * a as u64 % q as u64) as u32;
            delta = sub(&rot(&scale(&d, ak, q), k * s), &delta, q);
        }
        let t = p - 1 - m * s;
        d = rot(&delta, t + 1);
        let sup = support(&d);
        if sup != [0, t + 1] {
            return Err(Error::precondition(format!("gap reduction produced support {sup:?}")));
        }
        s = t + 1;
    }
    Ok(d)
}

/// Builds the witnesses of the `ρ = 2` dichotomy for `G(p, q, A)`.
///
/// Starting from a weight-2 diagonal element with support `{0, s}`, the gap
/// `s` is repeatedly shrunk: with `d = e(δ_0 + a δ_s)` the alternating sums
/// `Δ_{k+1} = S^{ks}(a^k d)S^{-ks} - Δ_k` have support `{0, ks}`, and for
/// `m = ⌊(p-1)/s⌋` the element `Δ_m` has a gap of `p - ms < s` across the
/// wrap-around. Once the support is `{0, 1}`, products of shifted copies of
/// `Δ` give `Γ`, and `Ω = ΓSΓ⁻¹S⁻¹` is the required commutator.
pub fn rho2_witness(g: &GroupSet) -> Result<Rho2Witness> {
    let p = g.dim();
    let order = g.identity().order();
    let q = order.get();
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::precondition(format!(
            "rho2 witness needs a prime p >= 3, got {p}"
        )));
    }
    if !is_prime(q as u64) {
        return Err(Error::precondition(format!("root order {q} is not prime")));
    }
    let mut diag: Vec<&MonomialMatrix> = g.elements().iter().filter(|x| x.is_diagonal()).collect();
    diag.sort();
    let weights: Vec<usize> = diag.iter().map(|d| d.rank_minus_identity()).collect();
    let rho = weights.iter().copied().filter(|&w| w > 0).min();
    if rho != Some(2) {
        return Err(Error::precondition(format!("rho is {rho:?}, not 2")));
    }
    let start = diag[weights.iter().position(|&w| w == 2).expect("rho is 2")];
    let d = reduce_gap(start.exps(), q)?;
    let delta = MonomialMatrix::diagonal(d.clone(), order);
    let gamma_exps = if q > 2 {
        (0..=(p - 3) / 2).fold(vec![0; p], |acc, j| add(&acc, &rot(&d, 2 * j), q))
    } else {
        let dprime = add(&d, &rot(&d, 1), q);
        let u = if p % 4 == 1 { (p - 1) / 4 } else { (p + 1) / 4 };
        (0..u).fold(vec![0; p], |acc, j| add(&acc, &rot(&dprime, 4 * j), q))
    };
    let gamma = MonomialMatrix::diagonal(gamma_exps, order);
    let s_mat = MonomialMatrix::cyclic_shift(p, order);
    let omega = gamma.commutator(&s_mat)?;
    if !g.contains(&gamma) || !g.contains(&omega) {
        return Err(Error::precondition("constructed witness is not a group element"));
    }
    let rank = omega.rank_minus_identity();
    Ok(Rho2Witness {
        delta,
        gamma,
        omega,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::group::DEFAULT_CAP;
    use crate::engine::invariants::compute_invariants;
    use crate::matgroup::make_gpqa_generators;

    fn gpqa(p: u32, q: u32, a: &[u32]) -> GroupSet {
        let (s, a) = make_gpqa_generators(p, q, a).unwrap();
        GroupSet::closure(&[s, a], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn p3_q2() {
        let w = rho2_witness(&gpqa(3, 2, &[0, 1, 1])).unwrap();
        assert_eq!(w.rank, 2);
        assert_eq!(w.delta.exps(), &[1, 1, 0]);
    }

    #[test]
    fn p5_q2_matches_pair_scan() {
        let g = gpqa(5, 2, &[1, 1, 0, 0, 0]);
        let inv = compute_invariants(&g);
        assert_eq!(inv.rho, Some(2));
        let w = rho2_witness(&g).unwrap();
        assert_eq!((w.rank, inv.r), (4, 4));
        assert_eq!(w.omega.exps().iter().filter(|&&e| e == 1).count(), 4);
    }

    #[test]
    fn p3_q5() {
        // diag(ω, ω², 1) spans all of F_5^3 (circulant determinant 4), so
        // it has ρ = 1; diag(ω, ω̄, 1) spans the sum-zero code
        assert_eq!(compute_invariants(&gpqa(3, 5, &[1, 2, 0])).rho, Some(1));
        let g = gpqa(3, 5, &[1, 4, 0]);
        let inv = compute_invariants(&g);
        assert_eq!(inv.rho, Some(2));
        let w = rho2_witness(&g).unwrap();
        assert_eq!((w.rank, inv.r), (3, 3));
    }

    #[test]
    fn wide_gaps_are_reduced() {
        for (v, q) in [
            (vec![1u32, 0, 0, 1, 0, 0, 0], 2u32),
            (vec![0, 2, 0, 3, 0], 5),
            (vec![0, 0, 1, 0, 0, 2, 0], 3),
            (vec![1, 0, 2, 0, 0], 3),
        ] {
            let d = reduce_gap(&v, q).unwrap();
            assert_eq!(support(&d), vec![0, 1], "{v:?}");
            // oracle: the result lies in the F_q span of the rotations of v
            let g = gpqa(v.len() as u32, q, &v);
            assert!(g.contains(&MonomialMatrix::diagonal(d, g.identity().order())));
        }
    }

    #[test]
    fn rejects_rho_one() {
        assert!(matches!(
            rho2_witness(&gpqa(3, 2, &[1, 0, 0])),
            Err(Error::Precondition(_))
        ));
    }
}
