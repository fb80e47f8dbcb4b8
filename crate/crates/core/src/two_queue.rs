//! Automata with two queues. Each trigger/enqueue component acts on its own
//! queue independently, which covers all nine combinations of
//! `{ε, *, d} × {ε, *, d}` in one rule.

use std::collections::BTreeSet;
use std::fmt;

use crate::automaton::{validate_edge, validate_frame, StateName, ValidationReport};
use crate::error::{Error, Result};
use crate::lts::ProcessGraph;
use crate::symbol::{prepend, word_to_display, ActionLabel, Symbol, Trigger, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTransition2 {
    pub src: StateName,
    pub action: ActionLabel,
    pub triggers: (Trigger, Trigger),
    pub enqueues: (Word, Word),
    pub dst: StateName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoQueueAutomaton {
    pub states: BTreeSet<StateName>,
    pub actions: BTreeSet<String>,
    pub data: BTreeSet<Symbol>,
    pub transitions: Vec<QTransition2>,
    pub initial: StateName,
    pub finals: BTreeSet<StateName>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QConfiguration2 {
    pub state: StateName,
    pub queue1: Word,
    pub queue2: Word,
}

impl QConfiguration2 {
    pub fn new(state: impl Into<String>, queue1: Word, queue2: Word) -> Self {
        QConfiguration2 { state: state.into(), queue1, queue2 }
    }
}

impl fmt::Display for QConfiguration2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.state, word_to_display(&self.queue1), word_to_display(&self.queue2))
    }
}

impl TwoQueueAutomaton {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        validate_frame(&mut report, &self.states, &self.actions, &self.data, &self.initial, &self.finals);
        for (i, t) in self.transitions.iter().enumerate() {
            let symbols = t
                .triggers
                .0
                .symbol()
                .into_iter()
                .chain(t.triggers.1.symbol())
                .chain(t.enqueues.0.iter())
                .chain(t.enqueues.1.iter())
                .cloned();
            validate_edge(&mut report, i, &self.states, &self.actions, &self.data, &t.src, &t.action, &t.dst, symbols);
        }
        report
    }

    pub fn step2(&self, cfg: &QConfiguration2) -> Result<Vec<(ActionLabel, QConfiguration2)>> {
        if !self.states.contains(&cfg.state) {
            return Err(Error::UnknownState(cfg.state.clone()));
        }
        let mut out: Vec<(ActionLabel, QConfiguration2)> = Vec::new();
        for t in self.transitions.iter().filter(|t| t.src == cfg.state) {
            let (Some(rest1), Some(rest2)) = (t.triggers.0.apply(&cfg.queue1), t.triggers.1.apply(&cfg.queue2)) else {
                continue;
            };
            let next =
                QConfiguration2::new(t.dst.clone(), prepend(&t.enqueues.0, &rest1), prepend(&t.enqueues.1, &rest2));
            if !out.iter().any(|(a, c)| *a == t.action && *c == next) {
                out.push((t.action.clone(), next));
            }
        }
        Ok(out)
    }
}

impl ProcessGraph for TwoQueueAutomaton {
    type Config = QConfiguration2;

    fn root(&self) -> QConfiguration2 {
        QConfiguration2::new(self.initial.clone(), vec![], vec![])
    }

    fn successors(&self, c: &QConfiguration2) -> Result<Vec<(ActionLabel, QConfiguration2)>> {
        self.step2(c)
    }

    fn is_final(&self, c: &QConfiguration2) -> bool {
        self.finals.contains(&c.state)
    }

    fn describe(&self, c: &QConfiguration2) -> String {
        c.to_string()
    }

    fn memory_len(&self, c: &QConfiguration2) -> usize {
        c.queue1.len() + c.queue2.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_word;

    fn sym(s: &str) -> Symbol {
        Symbol::new(s).unwrap()
    }

    fn word(s: &str) -> Word {
        if s.is_empty() {
            vec![]
        } else {
            parse_word(s).unwrap()
        }
    }

    fn single(t: QTransition2) -> TwoQueueAutomaton {
        TwoQueueAutomaton {
            states: ["s", "t"].iter().map(|s| s.to_string()).collect(),
            actions: ["a".to_string()].into_iter().collect(),
            data: ["d", "e", "x", "y"].iter().map(|s| sym(s)).collect(),
            transitions: vec![t],
            initial: "s".into(),
            finals: BTreeSet::new(),
        }
    }

    fn a() -> ActionLabel {
        ActionLabel::visible("a").unwrap()
    }

    #[test]
    fn any_any_prepends_both_blocks() {
        let qa = single(QTransition2 {
            src: "s".into(),
            action: a(),
            triggers: (Trigger::Any, Trigger::Any),
            enqueues: (word("d"), word("e")),
            dst: "t".into(),
        });
        let succ = qa.step2(&QConfiguration2::new("s", word("x"), word("y"))).unwrap();
        assert_eq!(succ, vec![(a(), QConfiguration2::new("t", word("d.x"), word("e.y")))]);
    }

    #[test]
    fn head_empty_trigger_is_gated_by_both_queues() {
        let qa = single(QTransition2 {
            src: "s".into(),
            action: a(),
            triggers: (Trigger::Head(sym("d")), Trigger::Empty),
            enqueues: (vec![], vec![]),
            dst: "t".into(),
        });
        let succ = qa.step2(&QConfiguration2::new("s", word("d"), vec![])).unwrap();
        assert_eq!(succ, vec![(a(), QConfiguration2::new("t", vec![], vec![]))]);
        assert!(qa.step2(&QConfiguration2::new("s", word("d"), word("y"))).unwrap().is_empty());
    }

    #[test]
    fn unknown_state_errors() {
        let qa = single(QTransition2 {
            src: "s".into(),
            action: a(),
            triggers: (Trigger::Any, Trigger::Any),
            enqueues: (vec![], vec![]),
            dst: "t".into(),
        });
        assert!(qa.step2(&QConfiguration2::new("u", vec![], vec![])).is_err());
    }
}
