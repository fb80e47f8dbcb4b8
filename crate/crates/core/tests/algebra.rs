mod common;

use std::collections::BTreeSet;

use common::config;
use proptest::prelude::*;
use qaw_core::algebra::*;
use qaw_core::bisim::strong_bisim;
use qaw_core::{ExplorationBound, Symbol};

fn act(text: &str) -> CommAction {
    CommAction::parse(text).unwrap()
}

/// `X = c!d.X + 1` and `Y = k?e.(Y || c?d.1)`.
fn spec() -> RecursiveSpec {
    let mut s = RecursiveSpec::default();
    s.equations.insert("X".into(), choice(prefix(act("c!d"), var("X")), accept()));
    s.equations.insert("Y".into(), prefix(act("k?e"), merge(var("Y"), prefix(act("c?d"), accept()))));
    s
}

const ACTIONS: [&str; 9] = ["c!d", "c?d", "c!e", "c?e", "k!e", "k?e", "c(d)", "a", "tau"];
const PORT_SETS: [&[&str]; 3] = [&["c"], &["k"], &["c", "k"]];

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(deadlock()), Just(accept()), Just(var("X")), Just(var("Y"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            3 => (prop::sample::select(&ACTIONS[..]), inner.clone()).prop_map(|(a, p)| prefix(act(a), p)),
            2 => (inner.clone(), inner.clone()).prop_map(|(p, q)| choice(p, q)),
            2 => (inner.clone(), inner.clone()).prop_map(|(p, q)| merge(p, q)),
            1 => (prop::sample::select(&PORT_SETS[..]), inner.clone()).prop_map(|(c, p)| encap(c.iter().copied(), p)),
            1 => (prop::sample::select(&PORT_SETS[..]), inner).prop_map(|(c, p)| hide(c.iter().copied(), p)),
        ]
    })
}

type Step = (String, String);

fn port_of(a: &CommAction) -> Option<&str> {
    match a {
        CommAction::Send(c, _) | CommAction::Receive(c, _) | CommAction::Comm(c, _) => Some(c),
        _ => None,
    }
}

/// One rule per arm, written out over printed actions and targets.
fn oracle(t: &Term, s: &RecursiveSpec) -> BTreeSet<Step> {
    let mut out = BTreeSet::new();
    match &**t {
        ProcessTerm::Deadlock | ProcessTerm::Accept => {}
        ProcessTerm::Prefix(a, p) => {
            out.insert((a.to_string(), p.to_string()));
        }
        ProcessTerm::Choice(p, q) => {
            out.extend(oracle(p, s));
            out.extend(oracle(q, s));
        }
        ProcessTerm::Merge(p, q) => {
            let ls = sos_pairs(p, s);
            let rs = sos_pairs(q, s);
            for (a, p2) in &ls {
                out.insert((a.to_string(), merge(p2.clone(), q.clone()).to_string()));
            }
            for (b, q2) in &rs {
                out.insert((b.to_string(), merge(p.clone(), q2.clone()).to_string()));
            }
            for (a, p2) in &ls {
                for (b, q2) in &rs {
                    let synced = match (a, b) {
                        (CommAction::Send(c, d), CommAction::Receive(c2, d2)) if c == c2 && d == d2 => true,
                        (CommAction::Receive(c, d), CommAction::Send(c2, d2)) if c == c2 && d == d2 => true,
                        _ => false,
                    };
                    if synced {
                        let port = port_of(a).unwrap();
                        let payload = &a.to_string()[port.len() + 1..];
                        out.insert((format!("{port}({payload})"), merge(p2.clone(), q2.clone()).to_string()));
                    }
                }
            }
        }
        ProcessTerm::Encap(ports, p) => {
            for (a, p2) in sos_pairs(p, s) {
                let io = matches!(a, CommAction::Send(..) | CommAction::Receive(..));
                if io && ports.contains(port_of(&a).unwrap()) {
                    continue;
                }
                out.insert((a.to_string(), encap(ports.iter().map(String::as_str), p2).to_string()));
            }
        }
        ProcessTerm::Hide(ports, p) => {
            for (a, p2) in sos_pairs(p, s) {
                let hidden = matches!(a, CommAction::Comm(..)) && ports.contains(port_of(&a).unwrap());
                let label = if hidden { "tau".to_string() } else { a.to_string() };
                out.insert((label, hide(ports.iter().map(String::as_str), p2).to_string()));
            }
        }
        ProcessTerm::Var(x) => out.extend(oracle(&s.equations[x], s)),
    }
    out
}

/// Oracle steps with the targets reparsed, for the operators that need them.
fn sos_pairs(t: &Term, s: &RecursiveSpec) -> Vec<(CommAction, Term)> {
    oracle(t, s).into_iter().map(|(a, p)| (act(&a), parse_term(&p).unwrap())).collect()
}

fn printed(steps: Vec<(CommAction, Term)>) -> BTreeSet<Step> {
    steps.into_iter().map(|(a, p)| (a.to_string(), p.to_string())).collect()
}

fn bisimilar(p: &Term, q: &Term) -> bool {
    let s = spec();
    let b = ExplorationBound::depth(6);
    let v = strong_bisim(&term_lts(p, &s, b).unwrap(), &term_lts(q, &s, b).unwrap());
    v.is_related() || v.witness_touches_frontier()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn printing_round_trips(t in term()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn sos_matches_the_rules(t in term()) {
        let s = spec();
        prop_assert_eq!(printed(sos_step(&t, &s).unwrap()), oracle(&t, &s));
    }

    #[test]
    fn choice_commutes_and_associates(p in term(), q in term(), r in term()) {
        prop_assert!(bisimilar(&choice(p.clone(), q.clone()), &choice(q.clone(), p.clone())));
        prop_assert!(bisimilar(&choice(choice(p.clone(), q.clone()), r.clone()), &choice(p, choice(q, r))));
    }

    #[test]
    fn merge_commutes(p in term(), q in term()) {
        prop_assert!(bisimilar(&merge(p.clone(), q.clone()), &merge(q, p)));
    }

    #[test]
    fn hiding_only_relabels(t in term(), c in prop::sample::select(&PORT_SETS[..])) {
        let s = spec();
        let inner = sos_step(&t, &s).unwrap();
        let outer = sos_step(&hide(c.iter().copied(), t.clone()), &s).unwrap();
        let relabelled: BTreeSet<Step> = inner
            .iter()
            .map(|(a, p)| {
                let a = match a {
                    CommAction::Comm(port, _) if c.contains(&port.as_str()) => CommAction::Tau,
                    other => other.clone(),
                };
                (a.to_string(), hide(c.iter().copied(), p.clone()).to_string())
            })
            .collect();
        prop_assert_eq!(printed(outer.clone()), relabelled);
        prop_assert!(outer.len() <= inner.len());
        let nothing_hidden = inner.iter().all(|(a, _)| !matches!(a, CommAction::Comm(port, _) if c.contains(&port.as_str())));
        prop_assert!(!nothing_hidden || outer.len() == inner.len());
    }
}

#[test]
fn queue_spec_data_is_respected() {
    let data: BTreeSet<Symbol> = [Symbol::new("d").unwrap(), Symbol::new("e").unwrap()].into();
    let s = queue_spec(&data).unwrap();
    let acts = alphabet(&var("Qio"), &s);
    for a in ["i?d", "i?e", "o!d", "o!e", "o!eps"] {
        assert!(acts.contains(&act(a)), "{a}");
    }
}
