//! Queue automata as input/output transducers: actions `i?d` read input,
//! `o!d` write output and `o!eps` signals an empty result.

use std::fmt;

use crate::algebra::{CommAction, Payload};
use crate::automaton::{QConfiguration, QueueAutomaton};
use crate::error::{Error, Result};
use crate::lts::{completed_traces, explore, is_deterministic, DeterminismVerdict, ExplorationBound};
use crate::symbol::{ActionLabel, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IoAction {
    Input(Symbol),
    Output(Symbol),
    EmptySignal,
}

impl IoAction {
    pub fn parse(token: &str) -> Result<Self> {
        let not_io = || Error::NotIoAction(token.to_string());
        match CommAction::parse(token).map_err(|_| not_io())? {
            CommAction::Receive(c, Payload::Data(d)) if c == "i" => Ok(IoAction::Input(d)),
            CommAction::Send(c, Payload::Data(d)) if c == "o" => Ok(IoAction::Output(d)),
            CommAction::Send(c, Payload::EmptyProbe) if c == "o" => Ok(IoAction::EmptySignal),
            _ => Err(not_io()),
        }
    }

    /// `None` for τ.
    pub fn from_label(label: &ActionLabel) -> Result<Option<Self>> {
        match label {
            ActionLabel::Tau => Ok(None),
            ActionLabel::Visible(t) => IoAction::parse(t).map(Some),
        }
    }
}

impl fmt::Display for IoAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoAction::Input(d) => write!(f, "i?{d}"),
            IoAction::Output(d) => write!(f, "o!{d}"),
            IoAction::EmptySignal => f.write_str("o!eps"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationVerdict {
    pub determinism: DeterminismVerdict,
    /// Completed traces (τ-erased) that are not input/output interleavings.
    pub bad_traces: Vec<Vec<String>>,
    pub bound: ExplorationBound,
}

impl ComputationVerdict {
    pub fn passes(&self) -> bool {
        self.determinism.is_deterministic() && self.bad_traces.is_empty()
    }
}

/// Checks the transducer discipline on the truncation: every action is an
/// I/O action or τ, the graph is deterministic, and every completed trace
/// interleaves an input word with an output word.
pub fn check_computation(qa: &QueueAutomaton, bound: ExplorationBound) -> Result<ComputationVerdict> {
    for t in &qa.transitions {
        IoAction::from_label(&t.action)?;
    }
    let lts = explore(qa, bound)?;
    let bad_traces = completed_traces(&lts, bound.max_depth)
        .into_iter()
        .filter(|w| w.iter().any(|a| IoAction::parse(a).is_err()))
        .collect();
    Ok(ComputationVerdict { determinism: is_deterministic(&lts), bad_traces, bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Stuck(QConfiguration),
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub output: Vec<Symbol>,
    /// Every step taken, τ included.
    pub trace: Vec<ActionLabel>,
    pub status: RunStatus,
    /// Number of input symbols read.
    pub consumed: usize,
    /// Input symbols already read when each output was produced.
    pub output_positions: Vec<usize>,
}

/// Runs `qa` on `input`, taking at most `budget` steps. At each
/// configuration the run reads the next input symbol if it can, else takes
/// a τ-step, else produces an output; it stops when none is possible.
/// More than one distinct move in the chosen tier is an error.
pub fn run_function(qa: &QueueAutomaton, input: &[Symbol], budget: usize) -> Result<RunResult> {
    let mut cfg = qa.initial_configuration();
    let mut result = RunResult {
        output: Vec::new(),
        trace: Vec::new(),
        status: RunStatus::BudgetExhausted,
        consumed: 0,
        output_positions: Vec::new(),
    };
    for _ in 0..budget {
        let mut reads = Vec::new();
        let mut taus = Vec::new();
        let mut outputs = Vec::new();
        for (a, next) in qa.step(&cfg)? {
            match IoAction::from_label(&a)? {
                Some(IoAction::Input(d)) => {
                    if input.get(result.consumed) == Some(&d) {
                        reads.push((a, next));
                    }
                }
                None => taus.push((a, next)),
                Some(_) => outputs.push((a, next)),
            }
        }
        let tier = [reads, taus, outputs].into_iter().find(|t| !t.is_empty());
        let Some(mut tier) = tier else {
            result.status = if qa.is_final(&cfg) { RunStatus::Completed } else { RunStatus::Stuck(cfg) };
            return Ok(result);
        };
        tier.sort();
        tier.dedup();
        if tier.len() > 1 {
            let moves: Vec<String> = tier.iter().map(|(a, c)| format!("{a} to {c}")).collect();
            return Err(Error::Nondeterminism(format!("at {cfg}: {}", moves.join(", "))));
        }
        let (a, next) = tier.pop().unwrap();
        match IoAction::from_label(&a)? {
            Some(IoAction::Input(_)) => result.consumed += 1,
            Some(IoAction::Output(d)) => {
                result.output.push(d);
                result.output_positions.push(result.consumed);
            }
            Some(IoAction::EmptySignal) => result.output_positions.push(result.consumed),
            None => {}
        }
        result.trace.push(a);
        cfg = next;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::symbol::parse_word;

    fn run(id: &str, input: &str) -> RunResult {
        let w = if input.is_empty() { vec![] } else { parse_word(input).unwrap() };
        run_function(&corpus::load_qa(id).unwrap(), &w, 1000).unwrap()
    }

    fn out(r: &RunResult) -> String {
        r.output.iter().map(Symbol::as_str).collect::<Vec<_>>().join(".")
    }

    #[test]
    fn fig5_doubles() {
        let r = run("fig5", "a.b");
        assert_eq!(r.status, RunStatus::Completed);
        assert_eq!(out(&r), "a.b.a.b");
    }

    #[test]
    fn fig5_empty_input_signals() {
        let r = run("fig5", "");
        assert_eq!(r.status, RunStatus::Completed);
        assert!(r.output.is_empty());
        assert_eq!(r.trace, vec![ActionLabel::Visible("o!eps".into())]);
    }

    #[test]
    fn fig6_compares() {
        assert_eq!(out(&run("fig6", "1.0.>.0.1")), "yes");
        assert_eq!(out(&run("fig6", "1.0.>.1.0")), "no");
        assert_eq!(out(&run("fig6", "0.1.>.1.0")), "no");
    }

    #[test]
    fn fig6_decides_early() {
        let r = run("fig6", "1.0.>.0.1");
        assert_eq!(r.status, RunStatus::Completed);
        assert_eq!(r.consumed, 4);
        assert_eq!(r.output_positions, vec![4]);
    }

    #[test]
    fn checks() {
        let b = ExplorationBound::depth(8);
        assert!(check_computation(&corpus::load_qa("fig5").unwrap(), b).unwrap().passes());
        assert!(check_computation(&corpus::load_qa("fig6").unwrap(), b).unwrap().passes());
        assert!(matches!(check_computation(&corpus::load_qa("fig1").unwrap(), b), Err(Error::NotIoAction(_))));
    }

    #[test]
    fn stuck_and_budget() {
        let r = run("fig6", "1.>");
        assert!(matches!(r.status, RunStatus::Stuck(_)));
        let w = parse_word("a.b").unwrap();
        let r = run_function(&corpus::load_qa("fig5").unwrap(), &w, 2).unwrap();
        assert_eq!(r.status, RunStatus::BudgetExhausted);
    }

    #[test]
    fn nondeterminism_is_reported() {
        let qa = crate::parse::parse_qa(
            "qa\ndata: d\nactions: o!d\nstates: s t\ninitial: s\nfinals: t\ntrans: s tau eps - t\ntrans: s tau eps - s\n",
        )
        .unwrap();
        assert!(matches!(run_function(&qa, &[], 10), Err(Error::Nondeterminism(_))));
    }
}
