use std::sync::Arc;

use serde_json::json;

use crate::corpus::code::{Analyses, GroupAnalysis};
use crate::corpus::report::{Instance, ReportBuilder, TheoremReport, WitnessData};
use crate::engine::rho2_witness;
use crate::error::Result;
use crate::matgroup::{factor_shift, Matrix, MonomialMatrix};

fn mono(m: &MonomialMatrix) -> Matrix {
    Matrix::Monomial(m.clone())
}

fn exps_set(ms: &[MonomialMatrix]) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = ms.iter().map(|m| m.exps().to_vec()).collect();
    v.sort();
    v
}

fn sorted(mut v: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    v.sort();
    v
}

fn all_pairs(q: u32) -> Vec<Vec<u32>> {
    (0..q).flat_map(|a| (0..q).map(move |b| vec![a, b])).collect()
}

fn conjugate_pairs(q: u32) -> Vec<Vec<u32>> {
    sorted((0..q).map(|a| vec![a, (q - a) % q]).collect())
}

fn instance(p: u32, q: u32, a: &[u32]) -> Instance {
    Instance::Gpqa { p, q, a: a.to_vec() }
}

fn group_witness(an: &GroupAnalysis) -> WitnessData {
    WitnessData::GroupInvariants {
        generators: an.generators().iter().map(mono).collect(),
        order: an.group.order(),
        rho: an.invariants.rho,
        r: an.r(),
    }
}

fn subsets_witness(an: &GroupAnalysis) -> WitnessData {
    WitnessData::GroupSubsets {
        generators: an.generators().iter().map(mono).collect(),
        diagonal: an.diagonal.iter().map(mono).collect(),
        commutator: an.commutator.iter().map(mono).collect(),
    }
}

fn r_witness(an: &GroupAnalysis) -> Option<WitnessData> {
    an.invariants
        .r_witness
        .as_ref()
        .map(|(x, y)| WitnessData::CommutatorRank {
            x: mono(x),
            y: mono(y),
            rank: an.r(),
        })
}

fn fmt_diag(m: &MonomialMatrix) -> String {
    let e: Vec<String> = m.exps().iter().map(u32::to_string).collect();
    format!("diag(ζ^[{}])", e.join(","))
}

/// Looks up `G(p, q, A)`, turning a cap overflow into a budget report.
fn lookup(
    memo: &Analyses,
    theorem: &str,
    p: u32,
    q: u32,
    a: &[u32],
) -> Result<std::result::Result<(Arc<GroupAnalysis>, ReportBuilder), TheoremReport>> {
    let b = ReportBuilder::new(theorem, instance(p, q, a));
    Ok(match memo.get(p, q, a)? {
        Ok(an) => Ok((an, b)),
        Err(cap) => Err(b.budget(cap)),
    })
}

/// If some commutator has rank exactly 2 (and none more), then `p = 2` or
/// `(p, q) = (3, 2)`.
pub fn verify_prop_2_2(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "2.2", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let r = an.r();
    if let Some(w) = r_witness(&an) {
        b.witness("maximal commutator", w);
    }
    if r != 2 {
        return Ok(b.vacuous(format!("r = {r}; the hypothesis needs r = 2")));
    }
    let ok = p == 2 || (p, q) == (3, 2);
    b.check("p = 2 or (p, q) = (3, 2)", ok, format!("r = 2 with p = {p}, q = {q}"));
    Ok(b.finish())
}

/// Condition name, violation count and the first violating `B` with its analysis.
type Violation = (&'static str, usize, Option<(MonomialMatrix, Arc<GroupAnalysis>)>);

/// Conditions on one nonscalar `B ∈ C_A`.
struct SubgroupScan {
    total: usize,
    violations: Vec<Violation>,
}

impl SubgroupScan {
    fn new(names: &[&'static str]) -> Self {
        SubgroupScan {
            total: 0,
            violations: names.iter().map(|n| (*n, 0, None)).collect(),
        }
    }

    fn record(&mut self, idx: usize, ok: bool, b: &MonomialMatrix, an: &Arc<GroupAnalysis>) {
        if !ok {
            let v = &mut self.violations[idx];
            v.1 += 1;
            if v.2.is_none() {
                v.2 = Some((b.clone(), an.clone()));
            }
        }
    }
}

/// Runs `f` on the analysis of every nonscalar `B` in the commutator
/// subgroup, in sorted order. Returns `None` if some `G_B` is over budget.
fn scan_nonscalar<F>(
    memo: &Analyses,
    an: &GroupAnalysis,
    names: &[&'static str],
    mut f: F,
) -> Result<Option<SubgroupScan>>
where
    F: FnMut(&mut SubgroupScan, &MonomialMatrix, &Arc<GroupAnalysis>),
{
    let mut scan = SubgroupScan::new(names);
    for bm in an.commutator.iter().filter(|c| !c.is_scalar()) {
        let gb = match memo.get(an.p, an.q, bm.exps())? {
            Ok(g) => g,
            Err(_) => return Ok(None),
        };
        scan.total += 1;
        f(&mut scan, bm, &gb);
    }
    Ok(Some(scan))
}

/// `G = D𝔖 = 𝔖D`, `C ⊆ D`, `det = 1` on `C`, and when `C ≠ D` one of the
/// two printed cases with its inequality chain.
pub fn verify_thm_3_1(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "3.1", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let order = an.root_order();
    let s = MonomialMatrix::cyclic_shift(p as usize, order);
    let mut left_bad = None;
    let mut right_bad = None;
    for x in an.group.elements() {
        match factor_shift(x) {
            Some((d, gamma)) => {
                if an.diagonal.binary_search(&d).is_err() && left_bad.is_none() {
                    left_bad = Some(x.clone());
                }
                let d2 = s.pow(-(gamma as i64)).mul(x)?;
                if (!d2.is_diagonal() || an.diagonal.binary_search(&d2).is_err()) && right_bad.is_none() {
                    right_bad = Some(x.clone());
                }
            }
            None => {
                left_bad.get_or_insert_with(|| x.clone());
                right_bad.get_or_insert_with(|| x.clone());
            }
        }
    }
    let size_ok = an.group.order() == p as usize * an.diagonal.len();
    b.check(
        "G = D S",
        left_bad.is_none() && size_ok,
        format!("|G| = {}, p|D| = {}", an.group.order(), p as usize * an.diagonal.len()),
    );
    b.check("G = S D", right_bad.is_none() && size_ok, String::new());
    for x in left_bad.iter().chain(&right_bad) {
        b.witness(
            "element without factorization",
            WitnessData::RankMinusIdentity {
                d: mono(x),
                rank: x.rank_minus_identity(),
            },
        );
    }
    let outside: Vec<&MonomialMatrix> = an
        .commutator
        .iter()
        .filter(|c| an.diagonal.binary_search(c).is_err())
        .collect();
    b.check(
        "C ⊆ D",
        outside.is_empty(),
        format!("|C| = {}, |D| = {}", an.commutator.len(), an.diagonal.len()),
    );
    let bad_det: Vec<&MonomialMatrix> = an
        .commutator
        .iter()
        .filter(|c| !c.determinant_value().is_one())
        .collect();
    b.check(
        "det = 1 on C",
        bad_det.is_empty(),
        format!("{} elements with det ≠ 1", bad_det.len()),
    );
    if !outside.is_empty() || !bad_det.is_empty() {
        b.witness("subgroups", subsets_witness(&an));
    }
    if an.commutator.len() == an.diagonal.len() {
        return Ok(b.finish());
    }
    let rho = an.rho();
    let r = an.r();
    if an.commutator.iter().all(MonomialMatrix::is_scalar) {
        b.check("p/2 ≤ ρ", 2 * rho >= p as usize, format!("ρ = {rho}, p = {p}"));
        b.check("ρ ≤ r", rho <= r, format!("ρ = {rho}, r = {r}"));
        b.check("r = p", r == p as usize, format!("r = {r}"));
        b.check("p = q", p == q, format!("p = {p}, q = {q}"));
        let roots = an
            .commutator
            .iter()
            .all(|c| (c.exps()[0] as u64 * p as u64).is_multiple_of(q as u64));
        b.check(
            "C = {ηI : η^p = 1}",
            roots && an.commutator.len() == p as usize,
            format!("|C| = {}", an.commutator.len()),
        );
        if b.has_failures() {
            b.witness("group", group_witness(&an));
            b.witness("subgroups", subsets_witness(&an));
            if let Some(w) = r_witness(&an) {
                b.witness("maximal commutator", w);
            }
        }
        return Ok(b.finish());
    }
    let names = [
        "C_B = D_B",
        "2 ≤ ρ_B",
        "ρ_B ≤ r_B",
        "r_B ≤ r_A",
        "ρ_A ≤ ρ_B",
        "ρ_B ≤ 2ρ_A",
    ];
    let Some(scan) = scan_nonscalar(memo, &an, &names, |sc, bm, gb| {
        let (rb, rhob) = (gb.r(), gb.rho());
        sc.record(0, gb.commutator == gb.diagonal, bm, gb);
        sc.record(1, rhob >= 2, bm, gb);
        sc.record(2, rhob <= rb, bm, gb);
        sc.record(3, rb <= r, bm, gb);
        sc.record(4, rho <= rhob, bm, gb);
        sc.record(5, rhob <= 2 * rho, bm, gb);
    })?
    else {
        return Ok(b.budget(memo.cap()));
    };
    let mut any_fail = false;
    for (idx, (name, count, first)) in scan.violations.iter().enumerate() {
        let detail = match first {
            Some((bm, gb)) => format!(
                "{count} of {} nonscalar B violate; first B = {} with ρ_B = {}, r_B = {}, |C_B| = {}, |D_B| = {} (ρ_A = {rho}, r_A = {r})",
                scan.total,
                fmt_diag(bm),
                gb.rho(),
                gb.r(),
                gb.commutator.len(),
                gb.diagonal.len()
            ),
            None => format!("all {} nonscalar B", scan.total),
        };
        b.check(name, *count == 0, detail);
        if let Some((_, gb)) = first {
            any_fail = true;
            let w = if idx == 0 {
                subsets_witness(gb)
            } else {
                group_witness(gb)
            };
            b.witness(&format!("first B violating {name}"), w);
        }
    }
    if any_fail {
        b.witness("group A", group_witness(&an));
    }
    Ok(b.finish())
}

/// Nonidentity commutator-subgroup elements `C` with `rank(C - I) < 2`.
fn low_rank_commutators(an: &GroupAnalysis) -> Vec<&MonomialMatrix> {
    an.commutator
        .iter()
        .filter(|c| !c.is_identity() && c.rank_minus_identity() < 2)
        .collect()
}

/// Case (i) of the `ρ = 1` tables: `r = p = q = 2` with the printed sets.
fn printed_small_case(an: &GroupAnalysis) -> bool {
    (an.r(), an.p, an.q) == (2, 2, 2)
        && exps_set(&an.commutator) == vec![vec![0, 0], vec![1, 1]]
        && exps_set(&an.diagonal) == all_pairs(2)
}

/// `2 ≤ r ≤ p`, `rank(C - I) ≥ 2` on `C \ {I}`, and for `ρ = 1` one of the
/// two printed cases; for `p = q = 2` the converse sets.
pub fn verify_cor_3_2(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "3.2", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let r = an.r();
    let rho = an.rho();
    if !b.check("2 ≤ r ≤ p", (2..=p as usize).contains(&r), format!("r = {r}, p = {p}")) {
        if let Some(w) = r_witness(&an) {
            b.witness("maximal commutator", w);
        }
    }
    let low = low_rank_commutators(&an);
    b.check(
        "rank(C - I) ≥ 2 on C \\ {I}",
        low.is_empty(),
        format!("{} violations", low.len()),
    );
    if let Some(c) = low.first() {
        b.witness(
            "low-rank commutator",
            WitnessData::RankMinusIdentity {
                d: mono(c),
                rank: c.rank_minus_identity(),
            },
        );
    }
    if rho == 1 {
        b.check(
            "C ≠ D",
            an.commutator.len() != an.diagonal.len(),
            format!("|C| = {}, |D| = {}", an.commutator.len(), an.diagonal.len()),
        );
        let case_i = printed_small_case(&an);
        let names = ["ρ_B ≥ 2", "C_B = D_B"];
        let mut min_rho_b = usize::MAX;
        let Some(scan) = scan_nonscalar(memo, &an, &names, |sc, bm, gb| {
            min_rho_b = min_rho_b.min(gb.rho());
            sc.record(0, gb.rho() >= 2, bm, gb);
            sc.record(1, gb.commutator == gb.diagonal, bm, gb);
        })?
        else {
            return Ok(b.budget(memo.cap()));
        };
        let case_ii = scan.total > 0 && scan.violations.iter().all(|v| v.1 == 0) && min_rho_b == 2;
        let mut detail = format!("case (i): {case_i}; case (ii): {} nonscalar B", scan.total);
        for (name, count, first) in &scan.violations {
            if let Some((bm, _)) = first {
                detail.push_str(&format!("; {name} fails for {count} (first {})", fmt_diag(bm)));
            }
        }
        if scan.total > 0 {
            detail.push_str(&format!("; min ρ_B = {min_rho_b}"));
        }
        if !b.check("ρ = 1 case (i) or (ii)", case_i || case_ii, detail) {
            for (name, _, first) in &scan.violations {
                if let Some((_, gb)) = first {
                    b.witness(&format!("first B violating {name}"), subsets_witness(gb));
                }
            }
            b.witness("group A", subsets_witness(&an));
        }
    }
    if (p, q) == (2, 2) {
        let ok = rho == 1
            && exps_set(&an.diagonal) == all_pairs(2)
            && exps_set(&an.commutator) == vec![vec![0, 0], vec![1, 1]];
        if !b.check("p = q = 2 gives ρ = 1 and the printed C, D", ok, format!("ρ = {rho}")) {
            b.witness("subgroups", subsets_witness(&an));
        }
    }
    Ok(b.finish())
}

/// If `ρ = 2`: `r = p` with `q > 2`, or `r = p - 1` with `q = 2`; the
/// explicit commutator `Ω` reaches the predicted rank.
pub fn verify_thm_3_3(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "3.3", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let rho = an.rho();
    if rho != 2 {
        return Ok(b.vacuous(format!("ρ = {rho}")));
    }
    let r = an.r();
    let p_us = p as usize;
    let case_i = r == p_us && q > 2;
    let case_ii = r + 1 == p_us && q == 2;
    if !b.check(
        "(r = p, q > 2) or (r = p - 1, q = 2)",
        case_i != case_ii,
        format!("r = {r}, p = {p}, q = {q}"),
    ) {
        b.witness("group", group_witness(&an));
    }
    if let Some(w) = r_witness(&an) {
        b.witness("maximal commutator", w);
    }
    if p >= 3 {
        match rho2_witness(&an.group) {
            Ok(w) => {
                let predicted = if q > 2 { p_us } else { p_us - 1 };
                let in_c = an.commutator.binary_search(&w.omega).is_ok();
                b.check(
                    "rank(Ω - I) is the predicted rank and equals r",
                    w.rank == predicted && w.rank == r,
                    format!("rank(Ω - I) = {}, predicted {predicted}, r = {r}", w.rank),
                );
                b.check("Ω ∈ C", in_c, String::new());
                let s = MonomialMatrix::cyclic_shift(p_us, an.root_order());
                b.witness(
                    "Δ",
                    WitnessData::RankMinusIdentity {
                        d: mono(&w.delta),
                        rank: w.delta.rank_minus_identity(),
                    },
                );
                b.witness(
                    "Γ and S",
                    WitnessData::CommutatorRank {
                        x: mono(&w.gamma),
                        y: mono(&s),
                        rank: w.rank,
                    },
                );
                b.witness(
                    "Ω",
                    WitnessData::RankMinusIdentity {
                        d: mono(&w.omega),
                        rank: w.rank,
                    },
                );
            }
            Err(e) => {
                b.check("explicit commutator construction", false, e.to_string());
                b.witness("group", group_witness(&an));
            }
        }
    }
    Ok(b.finish())
}

/// If `ρ = 1`: `r = p = q = 2` with the printed sets, or `r = p` with
/// `q > 2`, or `r = p - 1` with `q = 2`.
pub fn verify_cor_3_4(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "3.4", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let rho = an.rho();
    if rho != 1 {
        return Ok(b.vacuous(format!("ρ = {rho}")));
    }
    let r = an.r();
    let p_us = p as usize;
    let case_i = printed_small_case(&an);
    let case_ii = r == p_us && q > 2;
    let case_iii = r + 1 == p_us && q == 2;
    let ok = case_i || case_ii || case_iii;
    if !b.check("one of the three cases", ok, format!("r = {r}, p = {p}, q = {q}")) {
        b.witness("group", group_witness(&an));
        b.witness("subgroups", subsets_witness(&an));
    }
    if let Some(w) = r_witness(&an) {
        b.witness("maximal commutator", w);
    }
    Ok(b.finish())
}

/// If `r = 2`, one of five `(ρ, p, q)` cases holds; the printed `C` and `D`
/// are matched exactly in the first three and compared as findings in the
/// last two.
pub fn verify_cor_3_5(memo: &Analyses, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    let (an, mut b) = match lookup(memo, "3.5", p, q, a)? {
        Ok(x) => x,
        Err(rep) => return Ok(rep),
    };
    let r = an.r();
    if r != 2 {
        return Ok(b.vacuous(format!("r = {r}")));
    }
    let rho = an.rho();
    let c = exps_set(&an.commutator);
    let d = exps_set(&an.diagonal);
    let case = match (rho, p, q) {
        (1, 2, 2) => Some("i"),
        (1, 2, _) => Some("ii"),
        (1, 3, 2) => Some("iii"),
        (2, 2, _) if q > 2 => Some("iv"),
        (2, 3, 2) => Some("v"),
        _ => None,
    };
    let computed = json!({ "C": c, "D": d });
    if !b.check(
        "(ρ, p, q) matches a case",
        case.is_some(),
        format!("ρ = {rho}, p = {p}, q = {q}"),
    ) {
        b.witness("subgroups", subsets_witness(&an));
        return Ok(b.finish());
    }
    let case = case.expect("checked");
    let exact = |b: &mut ReportBuilder, pc: Vec<Vec<u32>>, pd: Vec<Vec<u32>>| {
        let ok_c = b.check(
            &format!("case ({case}) C matches"),
            c == pc,
            format!("|C| = {}, printed {}", c.len(), pc.len()),
        );
        let ok_d = b.check(
            &format!("case ({case}) D matches"),
            d == pd,
            format!("|D| = {}, printed {}", d.len(), pd.len()),
        );
        if !(ok_c && ok_d) {
            b.witness("subgroups", subsets_witness(&an));
        }
    };
    match case {
        "i" => exact(&mut b, vec![vec![0, 0], vec![1, 1]], all_pairs(2)),
        "ii" => exact(&mut b, conjugate_pairs(q), all_pairs(q)),
        "iii" => {
            let pc = vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
            let mut pd = pc.clone();
            pd.extend([vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
            exact(&mut b, pc, sorted(pd))
        }
        "iv" => {
            if !b.check(
                "case (iv) C = D",
                c == d,
                format!("|C| = {}, |D| = {}", c.len(), d.len()),
            ) {
                b.witness("subgroups", subsets_witness(&an));
            }
            let printed = all_pairs(q);
            if c != printed || d != printed {
                b.finding(
                    "case (iv) sets",
                    computed,
                    json!({ "text": "C = D = {diag(ω,η) : ω^q = η^q = 1}", "C": printed, "D": printed }),
                    "printed set contains elements of determinant ≠ 1, which cannot lie in C",
                );
            }
        }
        _ => {
            if !b.check(
                "case (v) C = D",
                c == d,
                format!("|C| = {}, |D| = {}", c.len(), d.len()),
            ) {
                b.witness("subgroups", subsets_witness(&an));
            }
            let printed = conjugate_pairs(q);
            b.finding(
                "case (v) sets",
                computed,
                json!({ "text": "C = D = {diag(ω,ω̄) : ω^q = 1}", "C": printed, "D": printed }),
                "printed elements have 2 diagonal entries but p = 3",
            );
        }
    }
    Ok(b.finish())
}

/// Identifiers of the verifiers that run on `G(p, q, A)` instances.
pub const GPQA_CASES: [&str; 6] = ["2.2", "3.1", "3.2", "3.3", "3.4", "3.5"];

/// Runs the verifier with the given id on `G(p, q, A)`.
pub fn verify_gpqa_case(memo: &Analyses, id: &str, p: u32, q: u32, a: &[u32]) -> Result<TheoremReport> {
    match id {
        "2.2" => verify_prop_2_2(memo, p, q, a),
        "3.1" => verify_thm_3_1(memo, p, q, a),
        "3.2" => verify_cor_3_2(memo, p, q, a),
        "3.3" => verify_thm_3_3(memo, p, q, a),
        "3.4" => verify_cor_3_4(memo, p, q, a),
        "3.5" => verify_cor_3_5(memo, p, q, a),
        other => Err(crate::error::Error::input(format!("{other} is not a G(p,q,A) case"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::report::Status;
    use crate::engine::DEFAULT_CAP;

    fn memo() -> Analyses {
        Analyses::new(DEFAULT_CAP)
    }

    #[test]
    fn two_prime_restriction() {
        let m = memo();
        assert_eq!(verify_prop_2_2(&m, 3, 3, &[1, 2, 0]).unwrap().status, Status::Vacuous);
        assert_eq!(verify_prop_2_2(&m, 2, 3, &[0, 1]).unwrap().status, Status::Pass);
        assert_eq!(
            verify_prop_2_2(&m, 5, 2, &[1, 1, 0, 0, 0]).unwrap().status,
            Status::Vacuous
        );
    }

    #[test]
    fn structure_small_cases() {
        let m = memo();
        let rep = verify_thm_3_1(&m, 2, 2, &[0, 1]).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.checks.iter().any(|c| c.name == "C = {ηI : η^p = 1}"));
        let rep = verify_thm_3_1(&m, 3, 2, &[1, 0, 0]).unwrap();
        assert_eq!(rep.status, Status::Pass, "{:?}", rep.checks);
        assert!(rep.checks.iter().any(|c| c.name == "ρ_B ≤ 2ρ_A"));
        let rep = verify_thm_3_1(&m, 3, 3, &[1, 2, 0]).unwrap();
        assert!(rep.checks.iter().find(|c| c.name == "G = D S").unwrap().pass);
    }

    #[test]
    fn structure_fails_when_p_equals_q() {
        // B = diag(ω, ω̄, 1) lies in C for A = diag(ω, 1, 1), but for G_B the
        // commutator subgroup is the scalars while D_B is the sum-zero code
        let m = memo();
        let rep = verify_thm_3_1(&m, 3, 3, &[1, 0, 0]).unwrap();
        assert_eq!(rep.status, Status::Fail);
        let failed: Vec<&str> = rep.failed_checks().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["C_B = D_B"]);
        for w in &rep.witnesses {
            assert_eq!(&w.replay(DEFAULT_CAP).unwrap(), w);
        }
    }

    #[test]
    fn rho_two_dichotomy() {
        let m = memo();
        let rep = verify_thm_3_3(&m, 3, 2, &[1, 1, 0]).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(verify_thm_3_3(&m, 2, 3, &[1, 2]).unwrap().status, Status::Pass);
        let rep = verify_thm_3_3(&m, 5, 2, &[1, 1, 0, 0, 0]).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.checks[1].detail.contains("rank(Ω - I) = 4"));
        assert_eq!(verify_thm_3_3(&m, 3, 2, &[1, 0, 0]).unwrap().status, Status::Vacuous);
    }

    #[test]
    fn rank_two_tables() {
        let m = memo();
        for (p, q, a) in [
            (2u32, 2u32, vec![0u32, 1]),
            (3, 2, vec![1, 0, 0]),
            (2, 3, vec![0, 1]),
            (2, 5, vec![0, 1]),
        ] {
            let rep = verify_cor_3_5(&m, p, q, &a).unwrap();
            assert_eq!(rep.status, Status::Pass, "{p} {q} {a:?} {:?}", rep.checks);
            assert!(rep.findings.is_empty());
        }
        let rep = verify_cor_3_5(&m, 3, 2, &[1, 1, 0]).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.findings.len(), 1);
        assert_eq!(
            rep.findings[0].computed["C"],
            json!([[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])
        );
        let rep = verify_cor_3_5(&m, 2, 3, &[1, 2]).unwrap();
        assert_eq!(rep.findings.len(), 1);
        assert_eq!(verify_cor_3_5(&m, 3, 3, &[1, 2, 0]).unwrap().status, Status::Vacuous);
    }

    #[test]
    fn rho_one_tables() {
        let m = memo();
        for (p, q, a) in [
            (2u32, 2u32, vec![0u32, 1]),
            (3, 2, vec![1, 0, 0]),
            (2, 3, vec![0, 1]),
            (5, 2, vec![1, 0, 0, 0, 0]),
        ] {
            assert_eq!(verify_cor_3_4(&m, p, q, &a).unwrap().status, Status::Pass);
            let rep = verify_cor_3_2(&m, p, q, &a).unwrap();
            assert_eq!(rep.status, Status::Pass, "{p} {q} {a:?} {:?}", rep.checks);
        }
        assert_eq!(verify_cor_3_4(&m, 3, 2, &[1, 1, 0]).unwrap().status, Status::Vacuous);
    }

    #[test]
    fn failures_carry_witnesses() {
        let m = memo();
        let rep = verify_cor_3_2(&m, 3, 3, &[1, 0, 0]).unwrap();
        assert_eq!(rep.status, Status::Fail);
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn budget_is_reported() {
        let m = Analyses::new(20);
        assert_eq!(
            verify_thm_3_1(&m, 3, 2, &[1, 0, 0]).unwrap().status,
            Status::BudgetExceeded
        );
    }
}
