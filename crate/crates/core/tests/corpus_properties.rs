use std::collections::HashSet;

use proptest::prelude::*;

use commrank::corpus::code::rotate;
use commrank::corpus::named::{random_lemma_2_6_instance, verify_lemma_2_6};
use commrank::corpus::{run_cases, verify_gpqa_case, Analyses, Status, GPQA_CASES};
use commrank::engine::{compute_invariants, GroupSet, DEFAULT_CAP};
use commrank::matgroup::{commutator_rank_monomial, factor_shift, make_gpqa_generators};

/// Parameter pairs whose groups stay small enough for exhaustive pair scans.
const SMALL: [(u32, u32); 7] = [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5), (5, 2)];

fn gpqa_input() -> impl Strategy<Value = (u32, u32, Vec<u32>)> {
    (0..SMALL.len())
        .prop_flat_map(|i| {
            let (p, q) = SMALL[i];
            (Just(p), Just(q), prop::collection::vec(0..q, p as usize))
        })
        .prop_filter("nonscalar", |(_, _, a)| a.iter().any(|&x| x != a[0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotations_give_identical_reports((p, q, a) in gpqa_input(), k in 0usize..7) {
        let direct = |a: &[u32]| {
            let (s, am) = make_gpqa_generators(p, q, a).unwrap();
            compute_invariants(&GroupSet::closure(&[s, am], DEFAULT_CAP).unwrap())
        };
        prop_assert_eq!(direct(&a), direct(&rotate(&a, k)));
    }

    #[test]
    fn structure_of_gpqa((p, q, a) in gpqa_input()) {
        let memo = Analyses::new(DEFAULT_CAP);
        let an = memo.get(p, q, &a).unwrap().unwrap();
        let inv = &an.invariants;
        // G = D S: each element is a diagonal element times a power of S
        prop_assert_eq!(an.group.order(), p as usize * an.diagonal.len());
        for x in an.group.elements() {
            let (d, _) = factor_shift(x).unwrap();
            prop_assert!(an.diagonal.binary_search(&d).is_ok());
        }
        let diag: HashSet<_> = an.diagonal.iter().collect();
        for c in &an.commutator {
            prop_assert!(diag.contains(c));
            prop_assert_eq!(c.exps().iter().sum::<u32>() % q, 0);
        }
        let rho = inv.rho.unwrap();
        prop_assert!(1 <= rho && rho <= inv.r && inv.r <= p as usize);
        prop_assert_eq!(inv.rank_one_pairs(), 0);
        for d in &an.diagonal {
            if d.rank_minus_identity() == 1 {
                prop_assert!(an.commutator.binary_search(d).is_err());
            }
        }
        prop_assert_eq!(an.irreducible, an.commutant_dim == 1);
    }

    #[test]
    fn no_commutator_has_rank_one((p, q, a) in gpqa_input()) {
        let (s, am) = make_gpqa_generators(p, q, &a).unwrap();
        let g = GroupSet::closure(&[s, am], DEFAULT_CAP).unwrap();
        let e = g.elements();
        for x in e.iter().take(40) {
            for y in e {
                prop_assert_ne!(commutator_rank_monomial(x, y), 1);
            }
        }
    }

    #[test]
    fn failing_reports_replay((p, q, a) in gpqa_input()) {
        let memo = Analyses::new(DEFAULT_CAP);
        for case in GPQA_CASES {
            let rep = verify_gpqa_case(&memo, case, p, q, &a).unwrap();
            if rep.status == Status::Fail {
                prop_assert!(!rep.witnesses.is_empty());
            }
            for w in &rep.witnesses {
                prop_assert_eq!(&w.replay(DEFAULT_CAP).unwrap(), w);
            }
        }
    }

    #[test]
    fn shifted_subspace_contract(seed in any::<u64>()) {
        let inst = random_lemma_2_6_instance(seed).unwrap();
        let rep = verify_lemma_2_6(&inst).unwrap();
        prop_assert_eq!(rep.status, Status::Pass, "{:?} {:?}", rep.checks, rep.note);
    }
}

#[test]
fn sweep_is_deterministic() {
    let cases = ["2.2", "3.1", "3.5"];
    let a = run_cases(&cases, 3, 3, DEFAULT_CAP).unwrap();
    let b = run_cases(&cases, 3, 3, DEFAULT_CAP).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
