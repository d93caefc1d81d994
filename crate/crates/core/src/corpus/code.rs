use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::cyclotomic::RootOrder;
use crate::engine::{commutator_subgroup, compute_invariants, diagonal_subgroup, GroupSet, InvariantsReport};
use crate::error::{Error, Result};
use crate::matgroup::{is_prime, DenseMatrix, MonomialMatrix};
use crate::reducibility::{commutant, is_irreducible};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form over `F_q` (`q` prime); zero rows dropped.
pub fn rref_mod(mut rows: Vec<Vec<u32>>, q: u32) -> Vec<Vec<u32>> {
    let q64 = q as u64;
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = pow_mod(rows[r][c] as u64, q64 - 2, q64);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % q64) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c] as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + q64 * q64 - f * y as u64) % q64) as u32;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// `S^k diag(v) S^{-k}` on exponent vectors: entry `t` moves to `t + k`.
pub fn rotate(v: &[u32], k: usize) -> Vec<u32> {
    let p = v.len();
    (0..p).map(|t| v[(t + p - k % p) % p]).collect()
}

/// Canonical basis of the `F_q`-span of all rotations of `a`: the
/// exponent vectors of the diagonal subgroup of `G(p, q, A)`.
pub fn cyclic_code_basis(a: &[u32], q: u32) -> Vec<Vec<u32>> {
    rref_mod((0..a.len()).map(|k| rotate(a, k)).collect(), q)
}

/// The lexicographically smallest rotation of `a`.
pub fn canonical_rotation(a: &[u32]) -> Vec<u32> {
    (0..a.len()).map(|k| rotate(a, k)).min().unwrap_or_default()
}

/// One representative (the smallest rotation) of every class of nonscalar
/// exponent vectors of length `p` over `Z/q`, in increasing order.
pub fn rotation_classes(p: u32, q: u32) -> Vec<Vec<u32>> {
    let p = p as usize;
    let mut out = Vec::new();
    let mut v = vec![0u32; p];
    loop {
        if v.iter().any(|&x| x != v[0]) && canonical_rotation(&v) == v {
            out.push(v.clone());
        }
        // increment as a base-q number, last position least significant
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
        }
    }
}

/// Everything the verifiers need about one group `G(p, q, ·)`, computed
/// once per diagonal code.
#[derive(Debug, Clone)]
pub struct GroupAnalysis {
    pub p: u32,
    pub q: u32,
    pub code: Vec<Vec<u32>>,
    pub group: GroupSet,
    pub invariants: InvariantsReport<MonomialMatrix>,
    /// Diagonal subgroup, sorted.
    pub diagonal: Vec<MonomialMatrix>,
    /// Commutator subgroup, sorted.
    pub commutator: Vec<MonomialMatrix>,
    pub irreducible: bool,
    pub commutant_dim: usize,
}

impl GroupAnalysis {
    /// The group generated by `S` and the diagonal matrices of the code
    /// basis, which equals `G(p, q, A)` for every `A` spanning the code.
    pub fn compute(p: u32, q: u32, code: Vec<Vec<u32>>, cap: usize) -> Result<Self> {
        let order = RootOrder::new(q)?;
        let mut gens = vec![MonomialMatrix::cyclic_shift(p as usize, order)];
        gens.extend(code.iter().map(|v| MonomialMatrix::diagonal(v.clone(), order)));
        let group = GroupSet::closure(&gens, cap)?;
        let invariants = compute_invariants(&group);
        let sorted = |h: GroupSet| {
            let mut v = h.elements().to_vec();
            v.sort();
            v
        };
        let diagonal = sorted(diagonal_subgroup(&group, cap)?);
        let commutator = sorted(commutator_subgroup(&group, cap)?);
        let dense: Vec<DenseMatrix> = gens.iter().map(MonomialMatrix::to_dense).collect();
        let irreducible = is_irreducible(&dense)?;
        let commutant_dim = commutant(&dense)?.dim;
        Ok(GroupAnalysis {
            p,
            q,
            code,
            group,
            invariants,
            diagonal,
            commutator,
            irreducible,
            commutant_dim,
        })
    }

    pub fn generators(&self) -> &[MonomialMatrix] {
        self.group.generators()
    }

    pub fn rho(&self) -> usize {
        self.invariants
            .rho
            .expect("a nonzero code has a nontrivial diagonal element")
    }

    pub fn r(&self) -> usize {
        self.invariants.r
    }

    pub fn root_order(&self) -> RootOrder {
        self.group.identity().order()
    }
}

/// Either an analysis or the cap that was exceeded.
pub type Outcome = std::result::Result<Arc<GroupAnalysis>, usize>;

/// `(p, q, RREF basis of the diagonal code)`.
pub type CodeKey = (u32, u32, Vec<Vec<u32>>);

/// Memo of group analyses keyed by `(p, q, code)`. Safe to share across
/// threads; concurrent misses on one key may compute it twice, with equal
/// results.
#[derive(Debug)]
pub struct Analyses {
    cap: usize,
    map: Mutex<HashMap<CodeKey, Outcome>>,
}

impl Analyses {
    pub fn new(cap: usize) -> Self {
        Analyses {
            cap,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Analysis of `G(p, q, A)`; validates the inputs.
    pub fn get(&self, p: u32, q: u32, a: &[u32]) -> Result<Outcome> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if !is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        if a.len() != p as usize {
            return Err(Error::input(format!(
                "exponent vector has length {}, expected {p}",
                a.len()
            )));
        }
        let a: Vec<u32> = a.iter().map(|&x| x % q).collect();
        if a.iter().all(|&x| x == a[0]) {
            return Err(Error::ScalarDiagonal(a));
        }
        let key = (p, q, cyclic_code_basis(&a, q));
        if let Some(hit) = self.map.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let outcome = match GroupAnalysis::compute(p, q, key.2.clone(), self.cap) {
            Ok(g) => Ok(Arc::new(g)),
            Err(Error::CapExceeded { cap }) => Err(cap),
            Err(e) => return Err(e),
        };
        self.map
            .lock()
            .expect("memo lock")
            .entry(key)
            .or_insert(outcome.clone());
        Ok(outcome)
    }

    /// Every completed analysis, ordered by `(p, q, code)`.
    pub fn analyses(&self) -> Vec<Arc<GroupAnalysis>> {
        let map = self.map.lock().expect("memo lock");
        let mut keys: Vec<_> = map.keys().collect();
        keys.sort();
        keys.into_iter().filter_map(|k| map[k].as_ref().ok().cloned()).collect()
    }

    /// Number of distinct groups analysed so far.
    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
