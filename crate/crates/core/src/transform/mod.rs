//! Automaton-to-automaton constructions. Every pass names its helper states
//! `<src>__p<k>__<n>` after the source state and index `k` of the transition
//! it expands, refuses inputs that already use its reserved symbols or
//! helper names, and checks a syntactic postcondition before returning.

mod merge;
mod normalize;
mod rtm_qa;
mod star;

use std::collections::BTreeSet;

pub use merge::{merge_two_queues, merge_two_queues_literal};
pub use normalize::normalize;
pub use rtm_qa::{qa_to_rtm, rtm_to_qa};
pub use star::eliminate_any_triggers;

use crate::automaton::{QTransition, QueueAutomaton, StateName};
use crate::error::{Error, Result};
use crate::symbol::{ActionLabel, Symbol, Trigger, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassReport<T> {
    pub pass: &'static str,
    pub fresh_symbols: Vec<Symbol>,
    pub fresh_states: Vec<StateName>,
    pub output: T,
    /// The syntactic postcondition that was checked.
    pub certificate: String,
}

pub(crate) fn require_fresh_symbols(data: &BTreeSet<Symbol>, reserved: &[Symbol]) -> Result<()> {
    match reserved.iter().find(|r| data.contains(*r)) {
        Some(r) => Err(Error::ReservedSymbol(r.to_string())),
        None => Ok(()),
    }
}

/// Accumulates the output automaton of a pass.
pub(crate) struct Builder {
    qa: QueueAutomaton,
    taken: BTreeSet<StateName>,
    fresh: Vec<StateName>,
}

impl Builder {
    /// Starts from `states`, `actions` and `initial` of the input, with the
    /// given data alphabet and no transitions.
    pub fn new(source: &QueueAutomaton, data: BTreeSet<Symbol>) -> Self {
        Self::from_parts(
            source.states.clone(),
            source.actions.clone(),
            data,
            source.initial.clone(),
            source.finals.clone(),
        )
    }

    pub fn from_parts(
        states: BTreeSet<StateName>,
        actions: BTreeSet<String>,
        data: BTreeSet<Symbol>,
        initial: StateName,
        finals: BTreeSet<StateName>,
    ) -> Self {
        Builder {
            taken: states.clone(),
            qa: QueueAutomaton { states, actions, data, transitions: Vec::new(), initial, finals },
            fresh: Vec::new(),
        }
    }

    /// Adds a helper state, failing if the name is already in use.
    pub fn fresh(&mut self, name: String) -> Result<StateName> {
        if !self.taken.insert(name.clone()) {
            return Err(Error::StateCollision(name));
        }
        self.qa.states.insert(name.clone());
        self.fresh.push(name.clone());
        Ok(name)
    }

    /// The helper `<src>__p<k>__<n>`.
    pub fn helper(&mut self, src: &str, k: usize, n: impl std::fmt::Display) -> Result<StateName> {
        self.fresh(format!("{src}__p{k}__{n}"))
    }

    pub fn add(&mut self, src: &str, action: ActionLabel, trigger: Trigger, enqueue: Word, dst: &str) {
        self.qa.transitions.push(QTransition { src: src.to_string(), action, trigger, enqueue, dst: dst.to_string() });
    }

    pub fn tau(&mut self, src: &str, trigger: Trigger, enqueue: Word, dst: &str) {
        self.add(src, ActionLabel::Tau, trigger, enqueue, dst);
    }

    /// `state τ[f/f] state` for every `f` in `symbols`.
    pub fn rotate<'a>(&mut self, state: &str, symbols: impl IntoIterator<Item = &'a Symbol>) {
        for f in symbols {
            self.tau(state, Trigger::Head(f.clone()), vec![f.clone()], state);
        }
    }

    pub fn set_initial(&mut self, initial: StateName) {
        self.qa.initial = initial;
    }

    pub fn mark_final(&mut self, s: &str) {
        self.qa.finals.insert(s.to_string());
    }

    pub fn finish(self) -> (QueueAutomaton, Vec<StateName>) {
        (self.qa, self.fresh)
    }
}

pub(crate) fn word(symbols: &[&Symbol]) -> Word {
    symbols.iter().map(|s| (*s).clone()).collect()
}

/// Fails unless `qa` validates and `shape` holds for every transition.
pub(crate) fn certify(qa: &QueueAutomaton, certificate: &str, shape: impl Fn(&QTransition) -> bool) -> Result<String> {
    qa.validate().into_result()?;
    if let Some(t) = qa.transitions.iter().find(|t| !shape(t)) {
        return Err(Error::Malformed(format!("postcondition '{certificate}' fails on {t}")));
    }
    Ok(certificate.to_string())
}
