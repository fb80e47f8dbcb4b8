#![allow(dead_code)]

use proptest::prelude::*;
use qaw_core::{ActionLabel, QTransition, QTransition2, QueueAutomaton, Symbol, Trigger, TwoQueueAutomaton, Word};

pub const STATES: [&str; 4] = ["s0", "s1", "s2", "s3"];
pub const DATA: [&str; 2] = ["a", "b"];
pub const ACTIONS: [&str; 2] = ["x", "y"];

pub fn sym(s: &str) -> Symbol {
    Symbol::new(s).unwrap()
}

pub fn state() -> impl Strategy<Value = String> {
    prop::sample::select(&STATES[..]).prop_map(String::from)
}

pub fn datum() -> impl Strategy<Value = Symbol> {
    prop::sample::select(&DATA[..]).prop_map(sym)
}

pub fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(datum(), 0..=max)
}

pub fn action() -> impl Strategy<Value = ActionLabel> {
    prop_oneof![Just(ActionLabel::Tau), prop::sample::select(&ACTIONS[..]).prop_map(|a| ActionLabel::Visible(a.into())),]
}

pub fn trigger() -> impl Strategy<Value = Trigger> {
    prop_oneof![Just(Trigger::Empty), Just(Trigger::Any), datum().prop_map(Trigger::Head)]
}

pub fn transition(max_enqueue: usize) -> impl Strategy<Value = QTransition> {
    (state(), action(), trigger(), word(max_enqueue), state())
        .prop_map(|(s, a, tr, w, t)| QTransition::new(s, a, tr, w, t))
}

fn frame(n: usize) -> (Vec<&'static str>, Vec<Symbol>) {
    (STATES[..n].to_vec(), DATA.iter().map(|d| sym(d)).collect())
}

/// A valid automaton over at most four states, data `{a,b}` and actions
/// `{x,y}`.
pub fn automaton(max_transitions: usize, max_enqueue: usize) -> impl Strategy<Value = QueueAutomaton> {
    (prop::collection::vec(transition(max_enqueue), 0..=max_transitions), prop::collection::btree_set(state(), 0..=2))
        .prop_map(|(transitions, finals)| {
            let (states, data) = frame(4);
            let mut qa = QueueAutomaton::new(states, ACTIONS, data, "s0", finals);
            qa.transitions = transitions;
            qa
        })
}

pub fn automaton2(max_transitions: usize, max_enqueue: usize) -> impl Strategy<Value = TwoQueueAutomaton> {
    let t = (state(), action(), trigger(), trigger(), word(max_enqueue), word(max_enqueue), state()).prop_map(
        |(src, action, t1, t2, e1, e2, dst)| QTransition2 { src, action, triggers: (t1, t2), enqueues: (e1, e2), dst },
    );
    (prop::collection::vec(t, 0..=max_transitions), prop::collection::btree_set(state(), 0..=2)).prop_map(
        |(transitions, finals)| {
            let (states, data) = frame(4);
            TwoQueueAutomaton {
                states: states.into_iter().map(String::from).collect(),
                actions: ACTIONS.iter().map(|a| a.to_string()).collect(),
                data: data.into_iter().collect(),
                transitions,
                initial: "s0".into(),
                finals: finals.into_iter().collect(),
            }
        },
    )
}

/// Integration tests have no source root for the regression file.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}
