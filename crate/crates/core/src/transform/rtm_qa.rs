//! Translations between reactive Turing machines and queue automata.

use std::collections::BTreeSet;

use super::{normalize, require_fresh_symbols, word, Builder, PassReport};
use crate::automaton::QueueAutomaton;
use crate::error::{Error, Result};
use crate::rtm::{Cell, Move, Rtm, RtmTransition};
use crate::symbol::{ActionLabel, Symbol, Trigger};

/// Encodes the tape `δ ď ζ` in state `s` as the queue `ζ^R ≬ δ d` (head `d`),
/// with the blank as the ordinary symbol `□`. A fresh initial state enters
/// the machine's initial state with `τ[ε/≬□]`.
///
/// For transition `i` from `s` (helpers `s__pi__tn`):
///
/// * `a[d/e]L`: `s a[d/$] t1`, rotate to `≬`, `t1 τ[≬/e≬□] t2`, rotate to
///   `$`, `t2 τ[$/ε] t`. This leaves one extra blank on the left end of the
///   tape, which denotes the same tape.
/// * `a[d/e]R`: `s a[d/$] t1`, rotate to `≬`, `t1 τ[≬/≬] t2`. The head of the
///   queue is now the first cell `c` right of the head (or `$` if there is
///   none): `t2 τ[c/ε] t3_c`, rotate to `$`, `t3_c τ[$/e c $] t4`, or
///   `t2 τ[$/e □ $] t4`. Then `t4` rotates past `≬` to `$` and `t4 τ[$/ε] t`.
pub fn rtm_to_qa(m: &Rtm) -> Result<PassReport<QueueAutomaton>> {
    let (sep, dollar, blank) = (Symbol::separator(), Symbol::bookmark(), Symbol::blank());
    require_fresh_symbols(&m.data, &[sep.clone(), dollar.clone(), blank.clone()])?;
    let cells: BTreeSet<Symbol> = m.data.iter().cloned().chain([blank.clone()]).collect();
    let cells_sep: BTreeSet<Symbol> = cells.iter().cloned().chain([sep.clone()]).collect();
    let mut data = cells.clone();
    data.insert(sep.clone());
    data.insert(dollar.clone());
    let mut b = Builder::from_parts(m.states.clone(), m.actions.clone(), data, m.initial.clone(), m.finals.clone());
    let start = b.fresh(format!("{}__init", m.initial))?;
    b.tau(&start, Trigger::Empty, word(&[&sep, &blank]), &m.initial);
    b.set_initial(start);
    let sd = |d: &Symbol| Trigger::Head(d.clone());

    for (i, t) in m.transitions.iter().enumerate() {
        let RtmTransition { src: s, action: a, read, write, movement, dst } = t;
        let (d, e) = (read.to_symbol(), write.to_symbol());
        let h1 = b.helper(s, i, "t1")?;
        let h2 = b.helper(s, i, "t2")?;
        b.add(s, a.clone(), sd(&d), vec![dollar.clone()], &h1);
        b.rotate(&h1, &cells);
        match movement {
            Move::L => {
                b.tau(&h1, sd(&sep), word(&[&e, &sep, &blank]), &h2);
                b.rotate(&h2, &cells);
                b.tau(&h2, sd(&dollar), vec![], dst);
            }
            Move::R => {
                let h4 = b.helper(s, i, "t4")?;
                b.tau(&h1, sd(&sep), vec![sep.clone()], &h2);
                for c in &cells {
                    let h3 = b.helper(s, i, format!("t3_{c}"))?;
                    b.tau(&h2, sd(c), vec![], &h3);
                    b.rotate(&h3, &cells);
                    b.tau(&h3, sd(&dollar), word(&[&e, c, &dollar]), &h4);
                }
                b.tau(&h2, sd(&dollar), word(&[&e, &blank, &dollar]), &h4);
                b.rotate(&h4, &cells_sep);
                b.tau(&h4, sd(&dollar), vec![], dst);
            }
        }
    }
    let (output, fresh_states) = b.finish();
    output.validate().into_result()?;
    Ok(PassReport {
        pass: "to-qa",
        fresh_symbols: vec![blank, sep, dollar],
        fresh_states,
        output,
        certificate: "valid one-queue automaton over D ∪ {□, ≬, $}".to_string(),
    })
}

/// Encodes the queue `δd` in state `s` as the tape `□ δ ď □`, and the empty
/// queue as `□̌`. Normalizes first when needed. For transition `i`:
///
/// * `a[d/ε]` becomes `a[d/□]L`, and `a[ε/ε]` becomes `a[□/□]L`.
/// * `a[*/d]`: `s a[□/d]R s′ τ[□/□]L t` on an empty queue; otherwise
///   `s a[e/e]L s″`, walk left over data to the blank, write `d` with
///   `s″ τ[□/d]R s′`, walk right over data and step back onto the head with
///   `s′ τ[□/□]L t`. Here `s′ = s__pi__r` and `s″ = s__pi__l`.
pub fn qa_to_rtm(qa: &QueueAutomaton) -> Result<PassReport<Rtm>> {
    let (source, mut fresh_states, fresh_symbols) = if qa.is_normalized() {
        (qa.clone(), Vec::new(), Vec::new())
    } else {
        let r = normalize(qa)?;
        (r.output, r.fresh_states, r.fresh_symbols)
    };
    let mut states = source.states.clone();
    let mut transitions = Vec::new();
    let mut fresh = |name: String, states: &mut BTreeSet<String>| -> Result<String> {
        if !states.insert(name.clone()) {
            return Err(Error::StateCollision(name));
        }
        fresh_states.push(name.clone());
        Ok(name)
    };
    let tr = |src: &str, action: ActionLabel, read: Cell, write: Cell, movement: Move, dst: &str| RtmTransition {
        src: src.to_string(),
        action,
        read,
        write,
        movement,
        dst: dst.to_string(),
    };
    for (i, t) in source.transitions.iter().enumerate() {
        match (&t.trigger, t.enqueue.first()) {
            (Trigger::Head(d), None) => {
                transitions.push(tr(&t.src, t.action.clone(), Cell::Data(d.clone()), Cell::Blank, Move::L, &t.dst));
            }
            (Trigger::Empty, None) => {
                transitions.push(tr(&t.src, t.action.clone(), Cell::Blank, Cell::Blank, Move::L, &t.dst));
            }
            (Trigger::Any, Some(d)) => {
                let s1 = fresh(format!("{}__p{i}__r", t.src), &mut states)?;
                let s2 = fresh(format!("{}__p{i}__l", t.src), &mut states)?;
                let d = Cell::Data(d.clone());
                transitions.push(tr(&t.src, t.action.clone(), Cell::Blank, d.clone(), Move::R, &s1));
                transitions.push(tr(&s1, ActionLabel::Tau, Cell::Blank, Cell::Blank, Move::L, &t.dst));
                for e in &source.data {
                    let e = Cell::Data(e.clone());
                    transitions.push(tr(&t.src, t.action.clone(), e.clone(), e.clone(), Move::L, &s2));
                    transitions.push(tr(&s2, ActionLabel::Tau, e.clone(), e.clone(), Move::L, &s2));
                    transitions.push(tr(&s1, ActionLabel::Tau, e.clone(), e.clone(), Move::R, &s1));
                }
                transitions.push(tr(&s2, ActionLabel::Tau, Cell::Blank, d, Move::R, &s1));
            }
            _ => return Err(Error::Precondition(format!("transition {t} is not normalized"))),
        }
    }
    let output = Rtm {
        states,
        actions: source.actions.clone(),
        data: source.data.clone(),
        transitions,
        initial: source.initial.clone(),
        finals: source.finals.clone(),
    };
    output.validate().into_result()?;
    Ok(PassReport {
        pass: "to-rtm",
        fresh_symbols,
        fresh_states,
        output,
        certificate: "valid RTM over the queue alphabet".to_string(),
    })
}
