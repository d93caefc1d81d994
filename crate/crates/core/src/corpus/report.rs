use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cyclotomic::{CycNum, RootOrder};
use crate::engine::{
    commutator_subgroup, compute_invariants, compute_invariants_generic, diagonal_subgroup, DenseGroup, GroupSet,
};
use crate::error::{Error, Result};
use crate::matgroup::{DenseMatrix, Matrix, MonomialMatrix};
use crate::reducibility::{commutant, is_irreducible, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis does not hold on this instance.
    Vacuous,
    /// The group exceeded the element cap.
    BudgetExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Vacuous => "vacuous",
            Status::BudgetExceeded => "budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Gpqa { p: u32, q: u32, a: Vec<u32> },
    Named { name: String },
}

impl Instance {
    pub fn named(name: impl Into<String>) -> Self {
        Instance::Named { name: name.into() }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Gpqa { p, q, a } => {
                let a: Vec<String> = a.iter().map(u32::to_string).collect();
                write!(f, "G({p},{q},[{}])", a.join(","))
            }
            Instance::Named { name } => f.write_str(name),
        }
    }
}

/// One asserted condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A disagreement between a computed value and a printed one that is not
/// treated as a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub label: String,
    pub computed: Value,
    pub printed: Value,
    pub note: String,
}

/// Exact data backing a check; [`Witness::replay`] recomputes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    #[serde(flatten)]
    pub data: WitnessData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessData {
    /// `rank(XY - YX)`.
    CommutatorRank { x: Matrix, y: Matrix, rank: usize },
    /// `rank(D - I)`.
    RankMinusIdentity { d: Matrix, rank: usize },
    /// `ρ` and `r` of the group generated by `generators`.
    GroupInvariants {
        generators: Vec<Matrix>,
        order: usize,
        rho: Option<usize>,
        r: usize,
    },
    /// Sorted diagonal and commutator subgroups of a monomial group.
    GroupSubsets {
        generators: Vec<Matrix>,
        diagonal: Vec<Matrix>,
        commutator: Vec<Matrix>,
    },
    /// Permutation patterns of `XY` and `YX`.
    Patterns {
        x: Matrix,
        y: Matrix,
        xy: Vec<u32>,
        yx: Vec<u32>,
    },
    /// Whether the span of `basis` is invariant under every matrix.
    Invariance {
        matrices: Vec<Matrix>,
        basis: Vec<Vec<CycNum>>,
        invariant: bool,
    },
    /// Burnside test and commutant dimension of a generating set.
    Burnside {
        generators: Vec<Matrix>,
        irreducible: bool,
        commutant_dim: usize,
    },
}

fn monomials(gens: &[Matrix]) -> Option<Vec<MonomialMatrix>> {
    let ms: Vec<MonomialMatrix> = gens.iter().map(Matrix::to_monomial).collect::<Option<_>>()?;
    let order = ms.iter().try_fold(RootOrder::ONE, |o, m| o.lcm(m.order())).ok()?;
    ms.iter().map(|m| m.lift(order)).collect::<Result<_>>().ok()
}

fn common_order(ms: &[Matrix]) -> Result<RootOrder> {
    ms.iter().try_fold(RootOrder::ONE, |o, m| o.lcm(m.order()))
}

impl Witness {
    pub fn new(label: impl Into<String>, data: WitnessData) -> Self {
        Witness {
            label: label.into(),
            data,
        }
    }

    /// Recomputes the witnessed values from the stored matrices. A faithful
    /// witness replays to itself.
    pub fn replay(&self, cap: usize) -> Result<Witness> {
        let data = match &self.data {
            WitnessData::CommutatorRank { x, y, .. } => {
                let rank = x.to_dense().commutator_rank(&y.to_dense())?;
                WitnessData::CommutatorRank {
                    x: x.clone(),
                    y: y.clone(),
                    rank,
                }
            }
            WitnessData::RankMinusIdentity { d, .. } => {
                let dd = d.to_dense();
                let rank = dd.sub(&DenseMatrix::identity(dd.rows(), dd.order()))?.rank();
                WitnessData::RankMinusIdentity { d: d.clone(), rank }
            }
            WitnessData::GroupInvariants { generators, .. } => {
                let (order, rho, r) = match monomials(generators) {
                    Some(ms) => {
                        let inv = compute_invariants(&GroupSet::closure(&ms, cap)?);
                        (inv.order, inv.rho, inv.r)
                    }
                    None => {
                        let ds: Vec<DenseMatrix> = generators.iter().map(Matrix::to_dense).collect();
                        let inv = compute_invariants_generic(&DenseGroup::closure(&ds, cap)?);
                        (inv.order, inv.rho, inv.r)
                    }
                };
                WitnessData::GroupInvariants {
                    generators: generators.clone(),
                    order,
                    rho,
                    r,
                }
            }
            WitnessData::GroupSubsets { generators, .. } => {
                let ms =
                    monomials(generators).ok_or_else(|| Error::input("subset witness needs monomial generators"))?;
                let g = GroupSet::closure(&ms, cap)?;
                let sorted = |h: GroupSet| {
                    let mut v = h.elements().to_vec();
                    v.sort();
                    v.into_iter().map(Matrix::Monomial).collect()
                };
                WitnessData::GroupSubsets {
                    generators: generators.clone(),
                    diagonal: sorted(diagonal_subgroup(&g, cap)?),
                    commutator: sorted(commutator_subgroup(&g, cap)?),
                }
            }
            WitnessData::Patterns { x, y, .. } => {
                let (mx, my) = match (x.to_monomial(), y.to_monomial()) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(Error::input("pattern witness needs monomial matrices")),
                };
                WitnessData::Patterns {
                    x: x.clone(),
                    y: y.clone(),
                    xy: mx.mul(&my)?.perm().to_vec(),
                    yx: my.mul(&mx)?.perm().to_vec(),
                }
            }
            WitnessData::Invariance { matrices, basis, .. } => {
                let n = matrices
                    .first()
                    .map(Matrix::dim)
                    .ok_or_else(|| Error::input("no matrices"))?;
                let order = common_order(matrices)?;
                let s = Subspace::span(n, basis, order)?;
                let invariant = matrices.iter().all(|m| s.is_invariant(&m.to_dense()));
                WitnessData::Invariance {
                    matrices: matrices.clone(),
                    basis: basis.clone(),
                    invariant,
                }
            }
            WitnessData::Burnside { generators, .. } => {
                let ds: Vec<DenseMatrix> = generators.iter().map(Matrix::to_dense).collect();
                WitnessData::Burnside {
                    generators: generators.clone(),
                    irreducible: is_irreducible(&ds)?,
                    commutant_dim: commutant(&ds)?.dim,
                }
            }
        };
        Ok(Witness {
            label: self.label.clone(),
            data,
        })
    }
}

/// Outcome of one verifier on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instance: Instance,
    pub status: Status,
    /// Why the report is vacuous or over budget.
    pub note: Option<String>,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    pub witnesses: Vec<Witness>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub(crate) struct ReportBuilder {
    theorem: String,
    instance: Instance,
    checks: Vec<Check>,
    findings: Vec<Finding>,
    witnesses: Vec<Witness>,
    vacuous: Option<String>,
    budget: Option<String>,
    start: Instant,
}

impl ReportBuilder {
    pub(crate) fn new(theorem: &str, instance: Instance) -> Self {
        ReportBuilder {
            theorem: theorem.to_string(),
            instance,
            checks: Vec::new(),
            findings: Vec::new(),
            witnesses: Vec::new(),
            vacuous: None,
            budget: None,
            start: Instant::now(),
        }
    }

    pub(crate) fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
        pass
    }

    pub(crate) fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| !c.pass)
    }

    pub(crate) fn finding(&mut self, label: &str, computed: Value, printed: Value, note: &str) {
        self.findings.push(Finding {
            label: label.to_string(),
            computed,
            printed,
            note: note.to_string(),
        });
    }

    pub(crate) fn witness(&mut self, label: &str, data: WitnessData) {
        self.witnesses.push(Witness::new(label, data));
    }

    pub(crate) fn vacuous(mut self, reason: impl Into<String>) -> TheoremReport {
        self.vacuous = Some(reason.into());
        self.finish()
    }

    pub(crate) fn budget(mut self, cap: usize) -> TheoremReport {
        self.budget = Some(format!("group exceeds the cap of {cap} elements"));
        self.finish()
    }

    pub(crate) fn finish(self) -> TheoremReport {
        let failed = self.checks.iter().any(|c| !c.pass);
        let (status, note) = if let Some(b) = self.budget {
            (Status::BudgetExceeded, Some(b))
        } else if failed {
            (Status::Fail, None)
        } else if let Some(v) = self.vacuous {
            (Status::Vacuous, Some(v))
        } else {
            (Status::Pass, None)
        };
        TheoremReport {
            theorem: self.theorem,
            instance: self.instance,
            status,
            note,
            checks: self.checks,
            findings: self.findings,
            witnesses: self.witnesses,
            runtime: self.start.elapsed(),
        }
    }
}

/// Per-theorem status counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub budget_exceeded: usize,
    pub findings: usize,
}

/// Status counts keyed by theorem id.
pub fn summarize(reports: &[TheoremReport]) -> BTreeMap<String, Tally> {
    let mut out: BTreeMap<String, Tally> = BTreeMap::new();
    for r in reports {
        let t = out.entry(r.theorem.clone()).or_default();
        match r.status {
            Status::Pass => t.pass += 1,
            Status::Fail => t.fail += 1,
            Status::Vacuous => t.vacuous += 1,
            Status::BudgetExceeded => t.budget_exceeded += 1,
        }
        t.findings += r.findings.len();
    }
    out
}

/// Human-readable table: a summary per theorem, one line per report, and
/// the failed checks and findings in full.
pub fn render_text(reports: &[TheoremReport]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<6} {:>6} {:>6} {:>8} {:>7} {:>9}\n",
        "case", "pass", "fail", "vacuous", "budget", "findings"
    ));
    for (id, t) in summarize(reports) {
        s.push_str(&format!(
            "{:<6} {:>6} {:>6} {:>8} {:>7} {:>9}\n",
            id, t.pass, t.fail, t.vacuous, t.budget_exceeded, t.findings
        ));
    }
    s.push('\n');
    for r in reports {
        let ok = r.checks.iter().filter(|c| c.pass).count();
        s.push_str(&format!(
            "{:<6} {:<28} {:<8} {ok}/{}",
            r.theorem,
            r.instance.to_string(),
            r.status,
            r.checks.len()
        ));
        if let Some(n) = &r.note {
            s.push_str(&format!("  ({n})"));
        }
        s.push('\n');
    }
    let failures: Vec<&TheoremReport> = reports.iter().filter(|r| r.status == Status::Fail).collect();
    if !failures.is_empty() {
        s.push_str("\nfailures:\n");
        for r in failures {
            for c in r.failed_checks() {
                s.push_str(&format!("  {} {}: {}: {}\n", r.theorem, r.instance, c.name, c.detail));
            }
        }
    }
    let with_findings: Vec<&TheoremReport> = reports.iter().filter(|r| !r.findings.is_empty()).collect();
    if !with_findings.is_empty() {
        s.push_str("\nfindings:\n");
        for r in with_findings {
            for f in &r.findings {
                s.push_str(&format!(
                    "  {} {}: {}: computed {} printed {} ({})\n",
                    r.theorem, r.instance, f.label, f.computed, f.printed, f.note
                ));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::make_gpqa_generators;

    #[test]
    fn status_precedence() {
        let mut b = ReportBuilder::new("x", Instance::named("t"));
        b.check("a", true, "");
        assert_eq!(b.finish().status, Status::Pass);
        let mut b = ReportBuilder::new("x", Instance::named("t"));
        b.check("a", false, "");
        assert_eq!(b.vacuous("no").status, Status::Fail);
        let b = ReportBuilder::new("x", Instance::named("t"));
        assert_eq!(b.budget(5).status, Status::BudgetExceeded);
    }

    #[test]
    fn witnesses_replay_and_roundtrip() {
        let (s, a) = make_gpqa_generators(3, 2, &[1, 0, 0]).unwrap();
        let gens = vec![Matrix::Monomial(s.clone()), Matrix::Monomial(a.clone())];
        let ws = vec![
            Witness::new(
                "c",
                WitnessData::CommutatorRank {
                    x: gens[0].clone(),
                    y: gens[1].clone(),
                    rank: 2,
                },
            ),
            Witness::new(
                "d",
                WitnessData::RankMinusIdentity {
                    d: gens[1].clone(),
                    rank: 1,
                },
            ),
            Witness::new(
                "g",
                WitnessData::GroupInvariants {
                    generators: gens.clone(),
                    order: 24,
                    rho: Some(1),
                    r: 2,
                },
            ),
            Witness::new(
                "p",
                WitnessData::Patterns {
                    x: gens[0].clone(),
                    y: gens[1].clone(),
                    xy: vec![1, 2, 0],
                    yx: vec![1, 2, 0],
                },
            ),
            Witness::new(
                "i",
                WitnessData::Invariance {
                    matrices: gens.clone(),
                    basis: vec![vec![CycNum::one(RootOrder::ONE); 3]],
                    invariant: false,
                },
            ),
            Witness::new(
                "b",
                WitnessData::Burnside {
                    generators: gens.clone(),
                    irreducible: true,
                    commutant_dim: 1,
                },
            ),
        ];
        for w in ws {
            assert_eq!(w.replay(1000).unwrap(), w);
            let json = serde_json::to_string(&w).unwrap();
            let back: Witness = serde_json::from_str(&json).unwrap();
            assert_eq!(back, w);
        }
    }

    #[test]
    fn text_table_lists_failures() {
        let mut b = ReportBuilder::new(
            "9.9",
            Instance::Gpqa {
                p: 2,
                q: 2,
                a: vec![0, 1],
            },
        );
        b.check("bound", false, "r = 3");
        let r = b.finish();
        let t = render_text(&[r]);
        assert!(t.contains("G(2,2,[0,1])"));
        assert!(t.contains("bound: r = 3"));
    }
}
