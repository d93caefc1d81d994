use std::collections::HashSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::report::{Instance, ReportBuilder, TheoremReport, WitnessData};
use crate::cyclotomic::{CycNum, RootOrder};
use crate::engine::{compute_invariants_generic, DenseGroup, FiniteGroup, GroupSet, InvariantsReport};
use crate::error::{Error, Result};
use crate::matgroup::{make_gpqa_generators, DenseMatrix, Matrix, MonomialMatrix};
use crate::reducibility::{
    check_stabilizer_dichotomy, commutant, decompose_rank2_group, is_irreducible, restriction_abelian,
    shifted_invariant_subspace, unit_vector, DecompositionStatus, ShiftBranch, Subspace,
};

fn o(m: u32) -> RootOrder {
    RootOrder::new(m).expect("positive order")
}

fn dense(m: &DenseMatrix) -> Matrix {
    Matrix::Dense(m.clone())
}

/// Lifts matrices to their common root order.
pub fn unify_orders(ms: &[DenseMatrix]) -> Result<Vec<DenseMatrix>> {
    let order = ms.iter().try_fold(RootOrder::ONE, |acc, m| acc.lcm(m.order()))?;
    ms.iter().map(|m| m.lift(order)).collect()
}

/// `x M ⊆ M` with both sides lifted to a common order.
fn preserves(m: &Subspace, x: &DenseMatrix) -> Result<bool> {
    let order = m.order().lcm(x.order())?;
    Ok(m.lift(order)?.is_invariant(&x.lift(order)?))
}

/// The `n²` matrix units `E_ij` (row-major) followed by zero.
pub fn build_eij_semigroup(n: usize) -> Vec<DenseMatrix> {
    let mut out: Vec<DenseMatrix> = (0..n)
        .flat_map(|i| (0..n).map(move |j| DenseMatrix::unit(n, i, j, RootOrder::ONE)))
        .collect();
    out.push(DenseMatrix::zeros(n, n, RootOrder::ONE));
    out
}

/// Matrix units form an irreducible semigroup of rank-≤1 matrices whose
/// commutators have rank at most 2, with 2 attained.
pub fn verify_example_1_4(n: usize) -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("1.4", Instance::named(format!("matrix units, n = {n}")));
    if n < 2 {
        return Ok(b.vacuous("n < 2"));
    }
    let s = build_eij_semigroup(n);
    let set: HashSet<&DenseMatrix> = s.iter().collect();
    let mut not_closed = None;
    for x in &s {
        for y in &s {
            let p = x.mul(y)?;
            if !set.contains(&p) && not_closed.is_none() {
                not_closed = Some((x.clone(), y.clone()));
            }
        }
    }
    b.check(
        "n² + 1 elements, closed under products",
        s.len() == n * n + 1 && not_closed.is_none(),
        format!("{} elements", s.len()),
    );
    let bad_rank = s.iter().filter(|x| !x.is_zero() && x.rank() != 1).count();
    b.check(
        "nonzero elements have rank 1",
        bad_rank == 0,
        format!("{bad_rank} violations"),
    );
    let irreducible = is_irreducible(&s)?;
    let cdim = commutant(&s)?.dim;
    b.check("irreducible", irreducible, format!("commutant dimension {cdim}"));
    b.check(
        "Burnside test agrees with commutant dimension",
        irreducible == (cdim == 1),
        String::new(),
    );
    b.witness(
        "Burnside",
        WitnessData::Burnside {
            generators: s.iter().map(dense).collect(),
            irreducible,
            commutant_dim: cdim,
        },
    );
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, x) in s.iter().enumerate() {
        for (j, y) in s.iter().enumerate() {
            let k = x.commutator_rank(y)?;
            if best.is_none_or(|(bk, _, _)| k > bk) {
                best = Some((k, i, j));
            }
        }
    }
    let (r, i, j) = best.expect("nonempty");
    b.check(
        "max commutator rank = 2",
        r == 2,
        format!("max over {} ordered pairs is {r}", s.len() * s.len()),
    );
    b.witness(
        "maximal commutator",
        WitnessData::CommutatorRank {
            x: dense(&s[i]),
            y: dense(&s[j]),
            rank: r,
        },
    );
    Ok(b.finish())
}

/// `T = diag(-1, 1, -1)` and the cyclic shift `S`, with root order 2.
pub fn pattern_group_generators() -> (MonomialMatrix, MonomialMatrix) {
    (
        MonomialMatrix::diagonal(vec![1, 0, 1], o(2)),
        MonomialMatrix::cyclic_shift(3, o(2)),
    )
}

/// Index (1, 2 or 3) of the printed support pattern of a 3×3 monomial
/// matrix: diagonal, entries at `(0,1),(1,2),(2,0)`, or entries at
/// `(0,2),(1,0),(2,1)`.
pub fn pattern_of(m: &MonomialMatrix) -> Option<u8> {
    match m.perm() {
        [0, 1, 2] => Some(1),
        [2, 0, 1] => Some(2),
        [1, 2, 0] => Some(3),
        _ => None,
    }
}

/// The 3×3 group `⟨T, S⟩`: irreducible, elements in three sign patterns
/// with zero or two entries `-1`, `AB` and `BA` share their pattern, and
/// every commutator has rank at most 2.
pub fn verify_prop_2_8() -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("2.8", Instance::named("<T,S>"));
    let (t, s) = pattern_group_generators();
    let g = GroupSet::closure(&[t.clone(), s.clone()], 1000)?;
    let e = g.elements();
    let gens = vec![t.to_dense(), s.to_dense()];
    let irreducible = is_irreducible(&gens)?;
    let cdim = commutant(&gens)?.dim;
    b.check(
        "irreducible",
        irreducible && cdim == 1,
        format!("order {}, commutant dimension {cdim}", g.order()),
    );
    b.witness(
        "Burnside",
        WitnessData::Burnside {
            generators: vec![Matrix::Monomial(t.clone()), Matrix::Monomial(s.clone())],
            irreducible,
            commutant_dim: cdim,
        },
    );
    b.check(
        "T and S have patterns 1 and 3",
        pattern_of(&t) == Some(1) && pattern_of(&s) == Some(3),
        format!("{:?}, {:?}", pattern_of(&t), pattern_of(&s)),
    );
    let off_pattern = e.iter().filter(|x| pattern_of(x).is_none()).count();
    b.check(
        "every element has one of the three patterns",
        off_pattern == 0,
        format!("{off_pattern} violations"),
    );
    let bad_signs = e
        .iter()
        .filter(|x| !matches!(x.exps().iter().filter(|&&v| v == 1).count(), 0 | 2))
        .count();
    b.check(
        "zero or two entries equal to -1",
        bad_signs == 0,
        format!("{bad_signs} violations"),
    );
    let mut pattern_bad = None;
    let mut support_bad = 0;
    let mut max_rank = (0, 0, 0);
    for (i, x) in e.iter().enumerate() {
        for (j, y) in e.iter().enumerate() {
            let xy = x.mul(y)?;
            let yx = y.mul(x)?;
            if xy.perm() != yx.perm() && pattern_bad.is_none() {
                pattern_bad = Some((i, j));
            }
            let diff = xy.to_dense().sub(&yx.to_dense())?;
            if diff.entries().iter().filter(|c| !c.is_zero()).count() > 2 {
                support_bad += 1;
            }
            let k = crate::matgroup::commutator_rank_monomial(x, y);
            if k > max_rank.0 {
                max_rank = (k, i, j);
            }
        }
    }
    let pairs = e.len() * e.len();
    b.check(
        "AB and BA share their pattern",
        pattern_bad.is_none(),
        format!("{pairs} ordered pairs"),
    );
    if let Some((i, j)) = pattern_bad {
        let (x, y) = (&e[i], &e[j]);
        b.witness(
            "pattern mismatch",
            WitnessData::Patterns {
                x: Matrix::Monomial(x.clone()),
                y: Matrix::Monomial(y.clone()),
                xy: x.mul(y)?.perm().to_vec(),
                yx: y.mul(x)?.perm().to_vec(),
            },
        );
    }
    b.check(
        "AB - BA has at most two nonzero entries",
        support_bad == 0,
        format!("{support_bad} violations"),
    );
    let (r, i, j) = max_rank;
    b.check(
        "max commutator rank = 2",
        r == 2,
        format!("max over {pairs} ordered pairs is {r}"),
    );
    b.witness(
        "maximal commutator",
        WitnessData::CommutatorRank {
            x: Matrix::Monomial(e[i].clone()),
            y: Matrix::Monomial(e[j].clone()),
            rank: r,
        },
    );
    Ok(b.finish())
}

/// `½[[1+i, 1-i], [1-i, 1+i]] · diag(ζ₈, 1)`, a unitary with entries in
/// `Q(ζ₈)`.
pub fn zeta8_unitary() -> DenseMatrix {
    let o8 = o(8);
    let one = CycNum::one(o8);
    let i = CycNum::root_of_unity(2, o8);
    let z = CycNum::root_of_unity(1, o8);
    let half = BigRational::new(1.into(), 2.into());
    let a = (&one + &i).scale(&half);
    let c = (&one - &i).scale(&half);
    DenseMatrix::from_rows(vec![vec![&a * &z, c.clone()], vec![&c * &z, a]]).expect("2x2")
}

/// The identity on `C^n` with the 2×2 block `v` acting on coordinates
/// `i` and `j`.
pub fn embed_2x2(n: usize, i: usize, j: usize, v: &DenseMatrix) -> DenseMatrix {
    let mut m = DenseMatrix::identity(n, v.order());
    for (r, a) in [i, j].into_iter().enumerate() {
        for (c, bidx) in [i, j].into_iter().enumerate() {
            m.set(a, bidx, v.get(r, c).clone());
        }
    }
    m
}

/// `U g U*` for each `g`.
pub fn conjugate_all(gens: &[DenseMatrix], u: &DenseMatrix) -> Result<Vec<DenseMatrix>> {
    let ui = u.conj_transpose();
    gens.iter().map(|g| u.mul(g)?.mul(&ui)).collect()
}

/// A named generating set of a finite matrix group.
#[derive(Debug, Clone)]
pub struct GroupInstance {
    pub name: String,
    pub generators: Vec<DenseMatrix>,
}

impl GroupInstance {
    fn new(name: &str, generators: Vec<DenseMatrix>) -> Result<Self> {
        Ok(GroupInstance {
            name: name.to_string(),
            generators: unify_orders(&generators)?,
        })
    }

    pub fn closure(&self, cap: usize) -> Result<DenseGroup> {
        DenseGroup::closure(&self.generators, cap)
    }
}

/// `X ⊕ I` for each monomial `X`, followed by `I ⊕ H` for each `H`.
fn block_sum(top: &[MonomialMatrix], bottom: &[MonomialMatrix]) -> Result<Vec<DenseMatrix>> {
    let order = top
        .iter()
        .chain(bottom)
        .try_fold(RootOrder::ONE, |acc, m| acc.lcm(m.order()))?;
    let n1 = top[0].dim();
    let n2 = bottom[0].dim();
    let mut out = Vec::new();
    for x in top {
        out.push(
            x.lift(order)?
                .direct_sum(&MonomialMatrix::identity(n2, order))?
                .to_dense(),
        );
    }
    for h in bottom {
        out.push(
            MonomialMatrix::identity(n1, order)
                .direct_sum(&h.lift(order)?)?
                .to_dense(),
        );
    }
    Ok(out)
}

fn pattern_pair() -> Vec<MonomialMatrix> {
    let (t, s) = pattern_group_generators();
    vec![t, s]
}

fn gpqa_pair(p: u32, q: u32, a: &[u32]) -> Result<Vec<MonomialMatrix>> {
    let (s, a) = make_gpqa_generators(p, q, a)?;
    Ok(vec![s, a])
}

fn diag(exps: &[u32], m: u32) -> MonomialMatrix {
    MonomialMatrix::diagonal(exps.to_vec(), o(m))
}

/// Groups with all commutator ranks at most 2 built as a nonabelian block
/// plus an abelian block, some conjugated by `Q(ζ₈)` unitaries mixing the
/// two blocks.
pub fn decomposition_instances() -> Result<Vec<GroupInstance>> {
    let v = zeta8_unitary();
    let ts_h1 = block_sum(&pattern_pair(), &[diag(&[1], 2)])?;
    let ts_h4 = block_sum(&pattern_pair(), &[diag(&[1, 0, 0, 0], 2), diag(&[0, 0, 1, 3], 4)])?;
    let g23_h2 = block_sum(&gpqa_pair(2, 3, &[0, 1])?, &[diag(&[1, 0], 2), diag(&[0, 1], 3)])?;
    let g25_h1 = block_sum(&gpqa_pair(2, 5, &[1, 4])?, &[diag(&[1], 2)])?;
    let g27_h3 = block_sum(&gpqa_pair(2, 7, &[0, 1])?, &[diag(&[1, 0, 1], 2), diag(&[0, 1, 0], 2)])?;
    let u4 = embed_2x2(4, 2, 3, &v);
    let u7 = embed_2x2(7, 2, 3, &v).mul(&embed_2x2(7, 0, 5, &v))?;
    let u4b = embed_2x2(4, 1, 2, &v);
    let u5 = embed_2x2(5, 1, 3, &v);
    Ok(vec![
        GroupInstance::new("<T,S> + H1", ts_h1.clone())?,
        GroupInstance::new("<T,S> + H4", ts_h4.clone())?,
        GroupInstance::new("G(2,3,[0,1]) + H2", g23_h2.clone())?,
        GroupInstance::new("G(2,5,[1,4]) + H1", g25_h1)?,
        GroupInstance::new("G(2,7,[0,1]) + H3", g27_h3.clone())?,
        GroupInstance::new("<T,S> + H1, conjugated", conjugate_all(&ts_h1, &u4)?)?,
        GroupInstance::new("<T,S> + H4, conjugated", conjugate_all(&ts_h4, &u7)?)?,
        GroupInstance::new("G(2,3,[0,1]) + H2, conjugated", conjugate_all(&g23_h2, &u4b)?)?,
        GroupInstance::new("G(2,7,[0,1]) + H3, conjugated", conjugate_all(&g27_h3, &u5)?)?,
    ])
}

/// Hypotheses shared by the unitary-group statements: unitary generators,
/// nonabelian, all commutator ranks at most 2.
fn rank2_hypothesis(gens: &[DenseMatrix], inv: &InvariantsReport<DenseMatrix>) -> Option<String> {
    if !gens.iter().all(DenseMatrix::is_unitary) {
        Some("generators are not unitary".into())
    } else if inv.abelian {
        Some("group is abelian".into())
    } else if inv.r > 2 {
        Some(format!("maximal commutator rank is {}", inv.r))
    } else {
        None
    }
}

/// Decomposition `C^n = M ⊕ M^⊥` with `1 ≤ dim M ≤ 3`, every element block
/// diagonal, and the group abelian on `M^⊥`.
pub fn verify_thm_2_7(inst: &GroupInstance, cap: usize) -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("2.7", Instance::named(inst.name.clone()));
    let g = match inst.closure(cap) {
        Ok(g) => g,
        Err(Error::CapExceeded { cap }) => return Ok(b.budget(cap)),
        Err(e) => return Err(e),
    };
    let inv = compute_invariants_generic(&g);
    if !inst.generators.iter().all(DenseMatrix::is_unitary) {
        return Ok(b.vacuous("generators are not unitary"));
    }
    if inv.r > 2 {
        return Ok(b.vacuous(format!("maximal commutator rank is {}", inv.r)));
    }
    let rep = decompose_rank2_group(&g)?;
    b.check(
        "1 ≤ dim M ≤ 3",
        rep.status == DecompositionStatus::Verified && (1..=3).contains(&rep.dim),
        format!("dim M = {}, |G| = {}, r = {}", rep.dim, g.order(), inv.r),
    );
    let comp = rep.m.orthocomplement();
    let mut not_block = 0;
    for x in g.elements() {
        if !(preserves(&rep.m, x)? && preserves(&comp, x)?) {
            not_block += 1;
        }
    }
    b.check(
        "every element is block diagonal",
        not_block == 0,
        format!("{not_block} of {} elements", g.order()),
    );
    b.check("abelian on M^⊥", rep.complement_abelian, String::new());
    let invariant = not_block == 0;
    b.witness(
        "M",
        WitnessData::Invariance {
            matrices: inst.generators.iter().map(dense).collect(),
            basis: rep.m.lift(g.identity().order().lcm(rep.m.order())?)?.basis().to_vec(),
            invariant,
        },
    );
    Ok(b.finish())
}

/// A group with subspaces whose stabilizers are examined.
#[derive(Debug, Clone)]
pub struct StabilizerInstance {
    pub group: GroupInstance,
    pub subspaces: Vec<Subspace>,
}

fn ones(n: usize, idx: &[usize]) -> Vec<CycNum> {
    (0..n)
        .map(|i| {
            if idx.contains(&i) {
                CycNum::one(RootOrder::ONE)
            } else {
                CycNum::zero(RootOrder::ONE)
            }
        })
        .collect()
}

fn span(n: usize, vs: Vec<Vec<CycNum>>) -> Subspace {
    Subspace::span(n, &vs, RootOrder::ONE).expect("vectors of length n")
}

pub fn stabilizer_instances() -> Result<Vec<StabilizerInstance>> {
    let ts = pattern_pair().iter().map(MonomialMatrix::to_dense).collect();
    let g32 = gpqa_pair(3, 2, &[1, 0, 0])?
        .iter()
        .map(MonomialMatrix::to_dense)
        .collect();
    let g23 = gpqa_pair(2, 3, &[0, 1])?.iter().map(MonomialMatrix::to_dense).collect();
    let g33 = gpqa_pair(3, 3, &[1, 2, 0])?
        .iter()
        .map(MonomialMatrix::to_dense)
        .collect();
    let ts_h1 = block_sum(&pattern_pair(), &[diag(&[1], 2)])?;
    let three = vec![
        span(3, vec![ones(3, &[0])]),
        span(3, vec![ones(3, &[0, 1])]),
        span(3, vec![ones(3, &[0, 1, 2])]),
        span(3, vec![ones(3, &[0]), ones(3, &[1])]),
    ];
    Ok(vec![
        StabilizerInstance {
            group: GroupInstance::new("<T,S>", ts)?,
            subspaces: three.clone(),
        },
        StabilizerInstance {
            group: GroupInstance::new("G(3,2,[1,0,0])", g32)?,
            subspaces: three.clone(),
        },
        StabilizerInstance {
            group: GroupInstance::new("G(2,3,[0,1])", g23)?,
            subspaces: vec![span(2, vec![ones(2, &[0])]), span(2, vec![ones(2, &[0, 1])])],
        },
        StabilizerInstance {
            group: GroupInstance::new("<T,S> + H1", ts_h1)?,
            subspaces: vec![
                span(4, vec![ones(4, &[3])]),
                span(4, vec![ones(4, &[0]), ones(4, &[1]), ones(4, &[2])]),
                span(4, vec![ones(4, &[0]), ones(4, &[3])]),
                span(4, vec![ones(4, &[0, 1, 2])]),
                span(4, vec![ones(4, &[0, 3])]),
            ],
        },
        StabilizerInstance {
            group: GroupInstance::new("G(3,3,[1,2,0])", g33)?,
            subspaces: three,
        },
    ])
}

/// For each subspace `M`: the stabilizers of `M` and `M^⊥` coincide, form a
/// subgroup, and act abelianly on `M` or on `M^⊥`.
pub fn verify_prop_2_4(inst: &StabilizerInstance, cap: usize) -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("2.4", Instance::named(inst.group.name.clone()));
    let g = match inst.group.closure(cap) {
        Ok(g) => g,
        Err(Error::CapExceeded { cap }) => return Ok(b.budget(cap)),
        Err(e) => return Err(e),
    };
    let inv = compute_invariants_generic(&g);
    if let Some(reason) = rank2_hypothesis(&inst.group.generators, &inv) {
        return Ok(b.vacuous(reason));
    }
    for (k, m) in inst.subspaces.iter().enumerate() {
        let m = m.lift(g.identity().order().lcm(m.order())?)?;
        let perp = m.orthocomplement();
        let mut stab = Vec::new();
        let mut stab_perp = Vec::new();
        for x in g.elements() {
            if preserves(&m, x)? {
                stab.push(x.clone());
            }
            if preserves(&perp, x)? {
                stab_perp.push(x.clone());
            }
        }
        b.check(
            &format!("M{k}: G(M) = G(M^⊥)"),
            stab == stab_perp,
            format!("{} vs {} elements", stab.len(), stab_perp.len()),
        );
        let closed = FiniteGroup::generated_by_subset(&stab, cap)?.order() == stab.len();
        b.check(
            &format!("M{k}: G(M) is a subgroup"),
            closed,
            format!("{} elements", stab.len()),
        );
        let rep = check_stabilizer_dichotomy(&g, &m, cap)?;
        let detail = format!(
            "abelian on M: {}, on M^⊥: {}{}",
            rep.on_subspace_abelian,
            rep.on_complement_abelian,
            if rep.vacuous { " (n ≤ 2)" } else { "" }
        );
        if !b.check(&format!("M{k}: abelian on M or on M^⊥"), rep.holds, detail) {
            b.witness(
                &format!("M{k} stabilizer"),
                WitnessData::Invariance {
                    matrices: stab.iter().map(dense).collect(),
                    basis: m.basis().to_vec(),
                    invariant: true,
                },
            );
        }
    }
    Ok(b.finish())
}

/// A group on `C^n`, a 3-dimensional subspace `N` with basis `basis`, and a
/// subgroup generated by lifts of `S` and `A` of `G(3, q, A)` acting on
/// that basis.
#[derive(Debug, Clone)]
pub struct Lemma25Instance {
    pub group: GroupInstance,
    pub subgroup: Vec<DenseMatrix>,
    pub basis: Vec<Vec<CycNum>>,
    pub q: u32,
    pub a: Vec<u32>,
}

pub fn lemma_2_5_instances() -> Result<Vec<Lemma25Instance>> {
    let lift = |top: &[MonomialMatrix], n2: usize| -> Result<Vec<DenseMatrix>> {
        let order = top[0].order();
        top.iter()
            .map(|x| Ok(x.direct_sum(&MonomialMatrix::identity(n2, order))?.to_dense()))
            .collect()
    };
    let coord = |n: usize| -> Vec<Vec<CycNum>> { (0..3).map(|i| unit_vector(n, i, RootOrder::ONE)).collect() };
    let p100 = gpqa_pair(3, 2, &[1, 0, 0])?;
    let p110 = gpqa_pair(3, 2, &[1, 1, 0])?;
    let g1 = block_sum(&p100, &[diag(&[1], 2)])?;
    let g2 = block_sum(&p110, &[diag(&[1, 0], 2), diag(&[0, 1], 2)])?;
    let u = embed_2x2(4, 2, 3, &zeta8_unitary());
    let u_cols: Vec<Vec<CycNum>> = (0..3).map(|j| (0..4).map(|i| u.get(i, j).clone()).collect()).collect();
    let abelian = vec![diag(&[1, 0, 0, 0], 2).to_dense(), diag(&[0, 1, 0, 1], 2).to_dense()];
    Ok(vec![
        Lemma25Instance {
            group: GroupInstance::new("G(3,2,[1,0,0]) + H1", g1.clone())?,
            subgroup: lift(&p100, 1)?,
            basis: coord(4),
            q: 2,
            a: vec![1, 0, 0],
        },
        Lemma25Instance {
            group: GroupInstance::new("G(3,2,[1,1,0]) + H2", g2)?,
            subgroup: lift(&p110, 2)?,
            basis: coord(5),
            q: 2,
            a: vec![1, 1, 0],
        },
        Lemma25Instance {
            group: GroupInstance::new("G(3,2,[1,0,0]) + H1, conjugated", conjugate_all(&g1, &u)?)?,
            subgroup: conjugate_all(&lift(&p100, 1)?, &u)?,
            basis: u_cols.clone(),
            q: 2,
            a: vec![1, 0, 0],
        },
        Lemma25Instance {
            group: GroupInstance::new("G(3,2,[1,0,0]) + H1, rotated N", g1)?,
            subgroup: lift(&p100, 1)?,
            basis: u_cols,
            q: 2,
            a: vec![1, 0, 0],
        },
        Lemma25Instance {
            group: GroupInstance::new("diagonal signs", abelian.clone())?,
            subgroup: abelian,
            basis: coord(4),
            q: 2,
            a: vec![1, 0, 0],
        },
    ])
}

/// `N` is invariant under the whole group, the group is irreducible on `N`
/// and abelian on `N^⊥`.
pub fn verify_lemma_2_5(inst: &Lemma25Instance, cap: usize) -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("2.5", Instance::named(inst.group.name.clone()));
    let gens = &inst.group.generators;
    let n = gens[0].rows();
    if n < 4 {
        return Ok(b.vacuous("dimension below 4"));
    }
    let g = match inst.group.closure(cap) {
        Ok(g) => g,
        Err(Error::CapExceeded { cap }) => return Ok(b.budget(cap)),
        Err(e) => return Err(e),
    };
    let inv = compute_invariants_generic(&g);
    if let Some(reason) = rank2_hypothesis(gens, &inv) {
        return Ok(b.vacuous(reason));
    }
    let order = g.identity().order();
    let basis_order = inst
        .basis
        .iter()
        .flatten()
        .try_fold(order, |acc, c| acc.lcm(c.order()))?;
    let order = basis_order;
    let nsub = Subspace::span(n, &inst.basis, order)?;
    if nsub.dim() != 3 {
        return Ok(b.vacuous(format!("N has dimension {}", nsub.dim())));
    }
    let (s3, a3) = make_gpqa_generators(3, inst.q, &inst.a)?;
    let cols = DenseMatrix::from_rows(
        (0..n)
            .map(|i| inst.basis.iter().map(|v| v[i].clone()).collect())
            .collect(),
    )?;
    if inst.subgroup.len() != 2 {
        return Ok(b.vacuous("subgroup must be given by lifts of S and A"));
    }
    for (h, m) in inst.subgroup.iter().zip([s3, a3]) {
        let lifted = h.lift(g.identity().order().lcm(h.order())?)?;
        if lifted.order() != g.identity().order() || !g.contains(&lifted) {
            return Ok(b.vacuous("subgroup generator is not in the group"));
        }
        if h.mul(&cols)? != cols.mul(&m.to_dense())? {
            return Ok(b.vacuous("subgroup does not act on N as G(3,q,A)"));
        }
    }
    let gens: Vec<DenseMatrix> = gens.iter().map(|x| x.lift(order)).collect::<Result<_>>()?;
    let invariant = gens.iter().all(|x| nsub.is_invariant(x));
    b.check("N is invariant", invariant, String::new());
    b.witness(
        "N",
        WitnessData::Invariance {
            matrices: gens.iter().map(dense).collect(),
            basis: inst.basis.clone(),
            invariant,
        },
    );
    if !invariant {
        return Ok(b.finish());
    }
    let restricted: Vec<DenseMatrix> = gens.iter().map(|x| nsub.restrict(x)).collect::<Result<_>>()?;
    let irr = is_irreducible(&restricted)?;
    b.check("irreducible on N", irr, String::new());
    b.witness(
        "restriction to N",
        WitnessData::Burnside {
            generators: restricted.iter().map(dense).collect(),
            irreducible: irr,
            commutant_dim: commutant(&restricted)?.dim,
        },
    );
    let perp = nsub.orthocomplement();
    let perp_invariant = gens.iter().all(|x| perp.is_invariant(x));
    let abelian = perp_invariant && restriction_abelian(&gens, &perp)?;
    b.check("abelian on N^⊥", abelian, format!("N^⊥ invariant: {perp_invariant}"));
    Ok(b.finish())
}

/// A semigroup (listed elements), a subspace `N` and an element `Z`.
#[derive(Debug, Clone)]
pub struct Lemma26Instance {
    pub name: String,
    pub semigroup: Vec<DenseMatrix>,
    pub subspace: Subspace,
    pub z: DenseMatrix,
}

/// Which part of the flag `N₀ ⊂ N ⊂ N₁` the random block matrices keep.
#[derive(Clone, Copy)]
enum Flag {
    Both,
    Lower,
    Upper,
}

fn random_block(rng: &mut ChaCha8Rng, n: usize, k: usize, flag: Flag, keep_n: bool) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n, RootOrder::ONE);
    for j in 0..n {
        for i in 0..n {
            let lower = k >= 1 && j + 1 < k && i + 1 >= k;
            let upper = j <= k && i > k;
            let allowed = match flag {
                Flag::Both => !lower && !upper,
                Flag::Lower => !lower,
                Flag::Upper => !upper,
            } && !(keep_n && j < k && i >= k);
            if allowed {
                m.set(i, j, CycNum::from_int(rng.gen_range(-2..=2), RootOrder::ONE));
            }
        }
    }
    m
}

/// A random unitary: a permutation with fourth-root-of-unity entries,
/// optionally followed by a `Q(ζ₈)` rotation of two coordinates.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Result<DenseMatrix> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let exps = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let p = MonomialMatrix::new(perm, exps, o(4))?.to_dense();
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        embed_2x2(n, i, j, &zeta8_unitary()).mul(&p)
    } else {
        Ok(p)
    }
}

/// A seeded random instance on `C^n`, `n ≤ 8`. The semigroup matrices
/// preserve part of a flag `N₀ ⊂ N ⊂ N₁` of codimension-1 steps (in a
/// random unitary frame), which forces `rank Z₂₁ ≤ 1` for every product.
pub fn random_lemma_2_6_instance(seed: u64) -> Result<Lemma26Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let k = rng.gen_range(1..n);
    let flag = match rng.gen_range(0..3) {
        0 => Flag::Both,
        1 => Flag::Lower,
        _ => Flag::Upper,
    };
    let keep_n = rng.gen_range(0..5) == 0;
    let z0 = random_block(&mut rng, n, k, flag, keep_n);
    let w0 = random_block(&mut rng, n, k, flag, false);
    let u = random_unitary(&mut rng, n)?;
    let conj = |m: &DenseMatrix| -> Result<DenseMatrix> { u.mul(m)?.mul(&u.conj_transpose()) };
    let z = conj(&z0)?;
    let w = conj(&w0)?;
    let coords: Vec<Vec<CycNum>> = (0..k).map(|j| (0..n).map(|i| u.get(i, j).clone()).collect()).collect();
    let subspace = Subspace::span(n, &coords, u.order())?;
    let semigroup = vec![z.clone(), w.clone(), z.mul(&z)?, z.mul(&w)?, w.mul(&z)?];
    Ok(Lemma26Instance {
        name: format!("random seed {seed}"),
        semigroup,
        subspace,
        z,
    })
}

/// Fixed instances: a transposition moving one vector of `N` out, and a
/// triangular `Z` leaving `N` invariant.
pub fn lemma_2_6_fixed_instances() -> Result<Vec<Lemma26Instance>> {
    let swap = MonomialMatrix::new(vec![2, 1, 0, 3], vec![0; 4], RootOrder::ONE)?.to_dense();
    let tri = DenseMatrix::identity(4, RootOrder::ONE).add(&DenseMatrix::unit(4, 0, 3, RootOrder::ONE))?;
    let n2 = Subspace::coordinate(4, &[0, 1], RootOrder::ONE);
    let shift = MonomialMatrix::cyclic_shift(4, RootOrder::ONE).to_dense();
    let shift2 = shift.mul(&shift)?;
    Ok(vec![
        Lemma26Instance {
            name: "transposition".into(),
            semigroup: vec![swap.clone()],
            subspace: n2.clone(),
            z: swap,
        },
        Lemma26Instance {
            name: "triangular".into(),
            semigroup: vec![tri.clone()],
            subspace: n2.clone(),
            z: tri,
        },
        Lemma26Instance {
            name: "double shift".into(),
            semigroup: vec![shift2.clone()],
            subspace: n2,
            z: shift2,
        },
    ])
}

/// The returned `N_Z` is `Z`-invariant and either lies in `N` with
/// codimension at most 1, or contains `N` with codimension at most 1 and
/// equals `N + ZN`.
pub fn verify_lemma_2_6(inst: &Lemma26Instance) -> Result<TheoremReport> {
    let mut b = ReportBuilder::new("2.6", Instance::named(inst.name.clone()));
    let (nz, branch) = match shifted_invariant_subspace(&inst.semigroup, &inst.subspace, &inst.z) {
        Ok(x) => x,
        Err(Error::Precondition(reason)) => return Ok(b.vacuous(reason)),
        Err(e) => return Err(e),
    };
    let n = &inst.subspace;
    let invariant = preserves(&nz, &inst.z)?;
    b.check(
        "N_Z is Z-invariant",
        invariant,
        format!("{branch:?}, dim N = {}, dim N_Z = {}", n.dim(), nz.dim()),
    );
    let order = n.order().lcm(nz.order())?;
    let (n, nz_l) = (n.lift(order)?, nz.lift(order)?);
    let inside = n.contains_subspace(&nz_l) && n.dim() <= nz_l.dim() + 1;
    let shifted = n.sum(&n.image(&inst.z)?)?;
    let outside = nz_l.contains_subspace(&n) && nz_l.dim() <= n.dim() + 1 && nz_l == shifted.lift(nz_l.order())?;
    let consistent = match branch {
        ShiftBranch::Unchanged => nz_l == n,
        ShiftBranch::Contained => inside,
        ShiftBranch::Containing => outside,
    };
    b.check("containment contract", (inside || outside) && consistent, String::new());
    b.witness(
        "N_Z",
        WitnessData::Invariance {
            matrices: vec![dense(&inst.z)],
            basis: nz.basis().to_vec(),
            invariant,
        },
    );
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::report::Status;
    use crate::engine::DEFAULT_CAP;

    #[test]
    fn eij_small() {
        let s = build_eij_semigroup(2);
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].commutator_rank(&s[0]).unwrap(), 0);
        for n in [2, 3, 4] {
            let rep = verify_example_1_4(n).unwrap();
            assert_eq!(rep.status, Status::Pass, "{:?}", rep.checks);
        }
    }

    #[test]
    fn pattern_group() {
        let rep = verify_prop_2_8().unwrap();
        assert_eq!(rep.status, Status::Pass, "{:?}", rep.checks);
        assert!(rep.checks.iter().any(|c| c.detail.contains("144 ordered pairs")));
        let (t, s) = pattern_group_generators();
        assert_eq!(GroupSet::closure(&[t, s], 100).unwrap().order(), 12);
        for w in &rep.witnesses {
            assert_eq!(&w.replay(DEFAULT_CAP).unwrap(), w);
        }
    }

    #[test]
    fn zeta8_is_unitary() {
        let v = zeta8_unitary();
        assert!(v.is_unitary());
        assert!(embed_2x2(5, 1, 3, &v).is_unitary());
    }

    #[test]
    fn decompositions() {
        for inst in decomposition_instances().unwrap() {
            let rep = verify_thm_2_7(&inst, DEFAULT_CAP).unwrap();
            assert_eq!(rep.status, Status::Pass, "{}: {:?}", inst.name, rep.checks);
        }
    }

    #[test]
    fn stabilizers() {
        let statuses: Vec<Status> = stabilizer_instances()
            .unwrap()
            .iter()
            .map(|i| verify_prop_2_4(i, DEFAULT_CAP).unwrap().status)
            .collect();
        assert_eq!(
            statuses,
            vec![Status::Pass, Status::Pass, Status::Pass, Status::Pass, Status::Vacuous]
        );
    }

    #[test]
    fn three_dimensional_blocks() {
        let statuses: Vec<Status> = lemma_2_5_instances()
            .unwrap()
            .iter()
            .map(|i| verify_lemma_2_5(i, DEFAULT_CAP).unwrap().status)
            .collect();
        assert_eq!(
            statuses,
            vec![
                Status::Pass,
                Status::Pass,
                Status::Pass,
                Status::Vacuous,
                Status::Vacuous
            ]
        );
    }

    #[test]
    fn shifted_subspaces() {
        for inst in lemma_2_6_fixed_instances().unwrap() {
            let rep = verify_lemma_2_6(&inst).unwrap();
            let expected = if inst.name == "double shift" {
                Status::Vacuous
            } else {
                Status::Pass
            };
            assert_eq!(rep.status, expected, "{}", inst.name);
        }
        for seed in 0..20 {
            let inst = random_lemma_2_6_instance(seed).unwrap();
            let rep = verify_lemma_2_6(&inst).unwrap();
            assert_eq!(rep.status, Status::Pass, "seed {seed}: {:?} {:?}", rep.checks, rep.note);
        }
    }
}
