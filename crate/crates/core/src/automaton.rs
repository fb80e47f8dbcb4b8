//! One-queue automata and their configuration semantics.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lts::ProcessGraph;
use crate::symbol::{prepend, word_to_display, ActionLabel, Symbol, Trigger, Word};

pub type StateName = String;

/// `src --action[trigger/enqueue]--> dst`. The enqueue block is kept in label
/// order `d1..dn`; it is prepended to the queue, so `dn` leaves first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QTransition {
    pub src: StateName,
    pub action: ActionLabel,
    pub trigger: Trigger,
    pub enqueue: Word,
    pub dst: StateName,
}

impl QTransition {
    pub fn new(
        src: impl Into<String>,
        action: ActionLabel,
        trigger: Trigger,
        enqueue: Word,
        dst: impl Into<String>,
    ) -> Self {
        QTransition { src: src.into(), action, trigger, enqueue, dst: dst.into() }
    }
}

impl fmt::Display for QTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} --{}[{}/{}]--> {}",
            self.src,
            self.action,
            match &self.trigger {
                Trigger::Empty => "ε".to_string(),
                Trigger::Any => "*".to_string(),
                Trigger::Head(d) => d.to_string(),
            },
            word_to_display(&self.enqueue),
            self.dst
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueAutomaton {
    pub states: BTreeSet<StateName>,
    pub actions: BTreeSet<String>,
    pub data: BTreeSet<Symbol>,
    pub transitions: Vec<QTransition>,
    pub initial: StateName,
    pub finals: BTreeSet<StateName>,
}

/// Every violated well-formedness condition; empty means well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, v: impl Into<String>) {
        self.violations.push(v.into());
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::Malformed(self.violations.join("; ")))
        }
    }
}

/// Checks the parts shared by every machine kind: non-empty sets, initial and
/// final states declared.
pub(crate) fn validate_frame(
    report: &mut ValidationReport,
    states: &BTreeSet<StateName>,
    actions: &BTreeSet<String>,
    data: &BTreeSet<Symbol>,
    initial: &str,
    finals: &BTreeSet<StateName>,
) {
    if states.is_empty() {
        report.push("states empty");
    }
    if actions.is_empty() {
        report.push("actions empty");
    }
    if data.is_empty() {
        report.push("data empty");
    }
    if !states.contains(initial) {
        report.push(format!("initial state '{initial}' not a state"));
    }
    for f in finals {
        if !states.contains(f) {
            report.push(format!("final state '{f}' not a state"));
        }
    }
}

pub(crate) fn validate_edge(
    report: &mut ValidationReport,
    index: usize,
    states: &BTreeSet<StateName>,
    actions: &BTreeSet<String>,
    data: &BTreeSet<Symbol>,
    src: &str,
    action: &ActionLabel,
    dst: &str,
    symbols: impl IntoIterator<Item = Symbol>,
) {
    for s in [src, dst] {
        if !states.contains(s) {
            report.push(format!("transition {index}: unknown state '{s}'"));
        }
    }
    if let ActionLabel::Visible(a) = action {
        if !actions.contains(a) {
            report.push(format!("transition {index}: action '{a}' not in action alphabet"));
        }
    }
    for d in symbols {
        if !data.contains(&d) {
            report.push(format!("transition {index}: symbol not in data alphabet: '{d}'"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QConfiguration {
    pub state: StateName,
    /// Head is the last element.
    pub queue: Word,
}

impl QConfiguration {
    pub fn new(state: impl Into<String>, queue: Word) -> Self {
        QConfiguration { state: state.into(), queue }
    }
}

impl fmt::Display for QConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.state, word_to_display(&self.queue))
    }
}

impl QueueAutomaton {
    /// An automaton with the given frame and no transitions.
    pub fn new(
        states: impl IntoIterator<Item = impl Into<String>>,
        actions: impl IntoIterator<Item = impl Into<String>>,
        data: impl IntoIterator<Item = Symbol>,
        initial: impl Into<String>,
        finals: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        QueueAutomaton {
            states: states.into_iter().map(Into::into).collect(),
            actions: actions.into_iter().map(Into::into).collect(),
            data: data.into_iter().collect(),
            transitions: Vec::new(),
            initial: initial.into(),
            finals: finals.into_iter().map(Into::into).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        validate_frame(&mut report, &self.states, &self.actions, &self.data, &self.initial, &self.finals);
        for (i, t) in self.transitions.iter().enumerate() {
            validate_edge(
                &mut report,
                i,
                &self.states,
                &self.actions,
                &self.data,
                &t.src,
                &t.action,
                &t.dst,
                t.trigger.symbol().cloned().into_iter().chain(t.enqueue.iter().cloned()),
            );
        }
        report
    }

    pub fn initial_configuration(&self) -> QConfiguration {
        QConfiguration::new(self.initial.clone(), Vec::new())
    }

    /// Successors together with the index of the transition that produced them.
    pub fn step_indexed(&self, cfg: &QConfiguration) -> Result<Vec<(usize, ActionLabel, QConfiguration)>> {
        if !self.states.contains(&cfg.state) {
            return Err(Error::UnknownState(cfg.state.clone()));
        }
        let mut out = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            if t.src != cfg.state {
                continue;
            }
            if let Some(rest) = t.trigger.apply(&cfg.queue) {
                let next = QConfiguration::new(t.dst.clone(), prepend(&t.enqueue, &rest));
                out.push((i, t.action.clone(), next));
            }
        }
        Ok(out)
    }

    /// The set of `(action, configuration)` successors of `cfg`.
    pub fn step(&self, cfg: &QConfiguration) -> Result<Vec<(ActionLabel, QConfiguration)>> {
        let mut out: Vec<(ActionLabel, QConfiguration)> = Vec::new();
        for (_, a, c) in self.step_indexed(cfg)? {
            if !out.iter().any(|(b, d)| *b == a && *d == c) {
                out.push((a, c));
            }
        }
        Ok(out)
    }

    /// Finality ignores the queue contents.
    pub fn is_final(&self, cfg: &QConfiguration) -> bool {
        self.finals.contains(&cfg.state)
    }

    pub fn count_any_triggers(&self) -> usize {
        self.transitions.iter().filter(|t| t.trigger == Trigger::Any).count()
    }

    /// Singleton enqueues `a[*/d]` and separate dequeues `a[ε/ε]`, `a[d/ε]` only.
    pub fn is_normalized(&self) -> bool {
        self.transitions.iter().all(|t| match (&t.trigger, t.enqueue.len()) {
            (Trigger::Any, 1) => true,
            (Trigger::Empty, 0) | (Trigger::Head(_), 0) => true,
            _ => false,
        })
    }
}

impl ProcessGraph for QueueAutomaton {
    type Config = QConfiguration;

    fn root(&self) -> QConfiguration {
        self.initial_configuration()
    }

    fn successors(&self, c: &QConfiguration) -> Result<Vec<(ActionLabel, QConfiguration)>> {
        self.step(c)
    }

    fn is_final(&self, c: &QConfiguration) -> bool {
        QueueAutomaton::is_final(self, c)
    }

    fn describe(&self, c: &QConfiguration) -> String {
        c.to_string()
    }

    fn memory_len(&self, c: &QConfiguration) -> usize {
        c.queue.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::symbol::parse_word;

    fn cfg(s: &str, q: &str) -> QConfiguration {
        QConfiguration::new(s, if q.is_empty() { vec![] } else { parse_word(q).unwrap() })
    }

    fn fig1() -> QueueAutomaton {
        corpus::load_qa("fig1").unwrap()
    }

    #[test]
    fn fig1_is_well_formed() {
        assert!(fig1().validate().is_ok(), "{:?}", fig1().validate());
    }

    #[test]
    fn empty_state_set_is_reported() {
        let mut qa = fig1();
        qa.states.clear();
        let report = qa.validate();
        assert!(report.violations.iter().any(|v| v == "states empty"));
    }

    #[test]
    fn foreign_enqueue_symbol_is_reported() {
        let mut qa = fig1();
        qa.transitions.push(QTransition::new(
            "s0",
            ActionLabel::Tau,
            Trigger::Any,
            vec![Symbol::new("c").unwrap()],
            "s0",
        ));
        let report = qa.validate();
        assert!(report.violations.iter().any(|v| v.contains("symbol not in data alphabet")));
    }

    #[test]
    fn fig1_dequeue_from_head() {
        let qa = fig1();
        let succ = qa.step(&cfg("s0", "b.a")).unwrap();
        assert!(succ.contains(&(ActionLabel::visible("a").unwrap(), cfg("s1", "b"))));
    }

    #[test]
    fn fig1_empty_queue_successors() {
        let qa = fig1();
        let succ = qa.step(&cfg("s0", "")).unwrap();
        assert!(succ.contains(&(ActionLabel::visible("a").unwrap(), cfg("s0", "a"))));
        assert!(succ.contains(&(ActionLabel::Tau, cfg("s1", ""))));
    }

    #[test]
    fn state_without_transitions_has_no_successors() {
        let qa = fig1();
        assert!(qa.step(&cfg("s2", "a.b")).unwrap().is_empty());
    }

    #[test]
    fn unknown_state_is_an_error() {
        assert_eq!(fig1().step(&cfg("nope", "")), Err(Error::UnknownState("nope".into())));
    }

    #[test]
    fn finality_ignores_queue() {
        let qa = fig1();
        assert!(qa.is_final(&cfg("s2", "")));
        assert!(qa.is_final(&cfg("s2", "a")));
        assert!(!qa.is_final(&cfg("s0", "")));
    }
}
