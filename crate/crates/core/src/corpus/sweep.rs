use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::corpus::code::{cyclic_code_basis, rotation_classes, Analyses, CodeKey};
use crate::corpus::gpqa::{verify_gpqa_case, GPQA_CASES};
use crate::corpus::named::{
    decomposition_instances, lemma_2_5_instances, lemma_2_6_fixed_instances, random_lemma_2_6_instance,
    stabilizer_instances, verify_example_1_4, verify_lemma_2_5, verify_lemma_2_6, verify_prop_2_4, verify_prop_2_8,
    verify_thm_2_7,
};
use crate::corpus::report::TheoremReport;
use crate::error::{Error, Result};
use crate::matgroup::is_prime;

pub const ALL_CASES: [&str; 12] = [
    "1.4", "2.2", "2.4", "2.5", "2.6", "2.7", "2.8", "3.1", "3.2", "3.3", "3.4", "3.5",
];

/// Number of seeded random instances in the shifted-subspace corpus.
pub const LEMMA_2_6_SEEDS: u64 = 32;

/// Case ids to run: `"all"` or one id.
pub fn resolve_cases(case: &str) -> Result<Vec<&'static str>> {
    if case == "all" {
        return Ok(ALL_CASES.to_vec());
    }
    ALL_CASES.iter().find(|&&c| c == case).map(|&c| vec![c]).ok_or_else(|| {
        Error::input(format!(
            "unknown case {case:?}; expected one of {} or all",
            ALL_CASES.join(", ")
        ))
    })
}

fn primes_up_to(n: u32) -> Vec<u32> {
    (2..=n).filter(|&k| is_prime(k as u64)).collect()
}

/// Reports for a case with a fixed instance list (not parametrised by
/// `G(p, q, A)`).
pub fn named_reports(case: &str, cap: usize) -> Result<Vec<TheoremReport>> {
    match case {
        "1.4" => (2..=4).map(verify_example_1_4).collect(),
        "2.4" => stabilizer_instances()?
            .iter()
            .map(|i| verify_prop_2_4(i, cap))
            .collect(),
        "2.5" => lemma_2_5_instances()?
            .iter()
            .map(|i| verify_lemma_2_5(i, cap))
            .collect(),
        "2.6" => {
            let mut insts = lemma_2_6_fixed_instances()?;
            for seed in 0..LEMMA_2_6_SEEDS {
                insts.push(random_lemma_2_6_instance(seed)?);
            }
            insts.par_iter().map(verify_lemma_2_6).collect()
        }
        "2.7" => decomposition_instances()?
            .par_iter()
            .map(|i| verify_thm_2_7(i, cap))
            .collect(),
        "2.8" => Ok(vec![verify_prop_2_8()?]),
        _ => Ok(Vec::new()),
    }
}

/// `(p, q, A)`.
pub type GpqaInstance = (u32, u32, Vec<u32>);

/// Every `(p, q, A)` with primes `p ≤ p_max`, `q ≤ q_max` and `A` running
/// over rotation classes, in that order.
pub fn gpqa_instances(p_max: u32, q_max: u32) -> Vec<GpqaInstance> {
    let mut out = Vec::new();
    for p in primes_up_to(p_max) {
        for q in primes_up_to(q_max) {
            out.extend(rotation_classes(p, q).into_iter().map(|a| (p, q, a)));
        }
    }
    out
}

/// Computes the distinct groups of `instances` in parallel.
pub fn prefetch(memo: &Analyses, instances: &[GpqaInstance]) -> Result<()> {
    let keys: BTreeSet<CodeKey> = instances
        .iter()
        .map(|(p, q, a)| (*p, *q, cyclic_code_basis(a, *q)))
        .collect();
    let reps: Vec<GpqaInstance> = keys.into_iter().map(|(p, q, code)| (p, q, code[0].clone())).collect();
    reps.par_iter()
        .try_for_each(|(p, q, a)| memo.get(*p, *q, a).map(|_| ()))
}

/// The `G(p, q, A)` cases among `cases` over the sweep range.
pub fn sweep(memo: &Analyses, p_max: u32, q_max: u32, cases: &[&str]) -> Result<Vec<TheoremReport>> {
    let cases: Vec<&str> = cases.iter().copied().filter(|c| GPQA_CASES.contains(c)).collect();
    if cases.is_empty() {
        return Ok(Vec::new());
    }
    let instances = gpqa_instances(p_max, q_max);
    prefetch(memo, &instances)?;
    let jobs: Vec<(&GpqaInstance, &str)> = instances
        .iter()
        .flat_map(|inst| cases.iter().map(move |&c| (inst, c)))
        .collect();
    jobs.par_iter()
        .map(|((p, q, a), c)| verify_gpqa_case(memo, c, *p, *q, a))
        .collect()
}

/// Named cases first (in case-id order), then the sweep.
pub fn run_cases(cases: &[&str], p_max: u32, q_max: u32, cap: usize) -> Result<Vec<TheoremReport>> {
    let mut out = Vec::new();
    for c in cases {
        out.extend(named_reports(c, cap)?);
    }
    let memo = Analyses::new(cap);
    out.extend(sweep(&memo, p_max, q_max, cases)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::report::Status;
    use crate::engine::DEFAULT_CAP;

    #[test]
    fn case_resolution() {
        assert_eq!(resolve_cases("all").unwrap().len(), 12);
        assert_eq!(resolve_cases("3.3").unwrap(), vec!["3.3"]);
        assert!(resolve_cases("9.9").is_err());
    }

    #[test]
    fn instance_order_is_deterministic() {
        let x = gpqa_instances(3, 3);
        assert_eq!(x.len(), 1 + 3 + 2 + 8);
        assert_eq!(x[0], (2, 2, vec![0, 1]));
        assert_eq!(x.last().unwrap(), &(3, 3, vec![1, 2, 2]));
    }

    #[test]
    fn small_sweep_is_repeatable() {
        let a = run_cases(&["2.2", "3.3"], 3, 3, DEFAULT_CAP).unwrap();
        let b = run_cases(&["2.2", "3.3"], 3, 3, DEFAULT_CAP).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.len(), 2 * 14);
        assert!(a.iter().all(|r| r.status != Status::Fail));
    }
}
