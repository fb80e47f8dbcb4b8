mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use proptest::prelude::*;
use qaw_core::language::accepts;
use qaw_core::lts::completed_traces;
use qaw_core::{explore, ActionLabel, ExplorationBound, FiniteLts, QConfiguration, QueueAutomaton};

fn edge_set(lts: &FiniteLts) -> BTreeSet<(String, String, String)> {
    lts.edges().map(|(s, a, t)| (lts.states[s].clone(), a.to_string(), lts.states[t].clone())).collect()
}

/// Subset construction over configurations, queue length capped at `k`.
fn brute_accepts(qa: &QueueAutomaton, word: &[String], k: usize) -> bool {
    let close = |set: HashSet<QConfiguration>| -> HashSet<QConfiguration> {
        let mut seen = set.clone();
        let mut todo: Vec<_> = set.into_iter().collect();
        while let Some(c) = todo.pop() {
            for (a, n) in qa.step(&c).unwrap() {
                if a.is_tau() && n.queue.len() <= k && seen.insert(n.clone()) {
                    todo.push(n);
                }
            }
        }
        seen
    };
    let mut cur = close(HashSet::from([qa.initial_configuration()]));
    for letter in word {
        let label = ActionLabel::Visible(letter.clone());
        let next = cur
            .iter()
            .flat_map(|c| qa.step(c).unwrap())
            .filter(|(a, n)| *a == label && n.queue.len() <= k)
            .map(|(_, n)| n)
            .collect();
        cur = close(next);
    }
    cur.iter().any(|c| qa.is_final(c))
}

fn letters() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(&ACTIONS[..]).prop_map(String::from), 0..=4)
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn explore_is_deterministic(qa in automaton(8, 2), d in 0usize..6) {
        let b = ExplorationBound::depth(d).with_queue(4);
        prop_assert_eq!(explore(&qa, b).unwrap(), explore(&qa, b).unwrap());
    }

    #[test]
    fn deeper_truncations_only_add(qa in automaton(8, 2), d in 0usize..5) {
        let small = explore(&qa, ExplorationBound::depth(d).with_queue(4)).unwrap();
        let big = explore(&qa, ExplorationBound::depth(d + 1).with_queue(4)).unwrap();
        let big_states: BTreeSet<_> = big.states.iter().collect();
        prop_assert!(small.states.iter().all(|s| big_states.contains(s)));
        prop_assert!(edge_set(&small).is_subset(&edge_set(&big)));
    }

    #[test]
    fn frontier_states_have_no_edges(qa in automaton(8, 2), d in 0usize..5) {
        let lts = explore(&qa, ExplorationBound::depth(d)).unwrap();
        for s in 0..lts.len() {
            prop_assert!(!lts.frontier[s] || lts.out[s].is_empty());
        }
    }

    #[test]
    fn accepted_words_are_completed_traces(qa in automaton(8, 2), w in letters()) {
        let b = ExplorationBound::depth(8).with_queue(4);
        if let qaw_core::language::AcceptVerdict::Accepted { witness } = accepts(&qa, &w, b).unwrap() {
            let lts = explore(&qa, ExplorationBound::depth(witness.len() + 1).with_queue(4)).unwrap();
            prop_assert!(completed_traces(&lts, witness.len()).contains(&w));
        }
    }

    #[test]
    fn accepts_matches_subset_construction(qa in automaton(6, 2), w in letters()) {
        // With the queue capped at 3 there are at most 4 * 15 configurations,
        // so depth 64 per letter covers every path the oracle can take.
        let b = ExplorationBound::depth(64 * (w.len() + 1)).with_queue(3);
        prop_assert_eq!(accepts(&qa, &w, b).unwrap().is_accepted(), brute_accepts(&qa, &w, 3));
    }
}
