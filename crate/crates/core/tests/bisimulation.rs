mod common;

use common::config;
use proptest::prelude::*;
use qaw_core::bisim::naive::{naive_related, naive_relation};
use qaw_core::bisim::{bisim, partition_relation, random_lts, Mode};
use qaw_core::FiniteLts;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lts(seed: u64, n: usize, tau: f64) -> FiniteLts {
    random_lts(&mut ChaCha8Rng::seed_from_u64(seed), n, 2, tau)
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Strong), Just(Mode::Branching)]
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn relation_is_an_equivalence(seed: u64, n in 1usize..12, m in mode()) {
        let r = partition_relation(&lts(seed, n, 0.4), m);
        for s in 0..n {
            prop_assert!(r[s][s]);
            for t in 0..n {
                prop_assert_eq!(r[s][t], r[t][s]);
                for u in 0..n {
                    prop_assert!(!(r[s][t] && r[t][u]) || r[s][u]);
                }
            }
        }
    }

    #[test]
    fn strong_refines_branching(seed: u64, n in 1usize..12) {
        let x = lts(seed, n, 0.4);
        let strong = partition_relation(&x, Mode::Strong);
        let branching = partition_relation(&x, Mode::Branching);
        for s in 0..n {
            for t in 0..n {
                prop_assert!(!strong[s][t] || branching[s][t]);
            }
        }
    }

    #[test]
    fn partition_matches_naive_fixpoint(seed: u64, n in 1usize..=30, m in mode()) {
        let x = lts(seed, n, 0.3);
        prop_assert_eq!(partition_relation(&x, m), naive_relation(&x, m));
    }

    #[test]
    fn verdict_on_pairs_matches_naive(s1: u64, s2: u64, n1 in 1usize..8, n2 in 1usize..8, m in mode()) {
        let (a, b) = (lts(s1, n1, 0.5), lts(s2, n2, 0.5));
        prop_assert_eq!(bisim(&a, &b, m).is_related(), naive_related(&a, &b, m));
    }

    #[test]
    fn verdicts_are_reproducible(s1: u64, s2: u64, n in 1usize..10, m in mode()) {
        let (a, b) = (lts(s1, n, 0.5), lts(s2, n, 0.5));
        prop_assert_eq!(bisim(&a, &b, m), bisim(&a, &b, m));
        prop_assert_eq!(partition_relation(&a, m), partition_relation(&a, m));
    }
}
