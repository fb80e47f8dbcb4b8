//! Reactive Turing machines over a two-way tape with one marked cell.

use std::collections::BTreeSet;
use std::fmt;

use crate::automaton::{validate_edge, validate_frame, StateName, ValidationReport};
use crate::error::{Error, Result};
use crate::lts::ProcessGraph;
use crate::symbol::{ActionLabel, Symbol, BLANK};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Blank,
    Data(Symbol),
}

impl Cell {
    pub fn is_blank(&self) -> bool {
        matches!(self, Cell::Blank)
    }

    /// The cell as a queue symbol, with the blank as `□`.
    pub fn to_symbol(&self) -> Symbol {
        match self {
            Cell::Blank => Symbol::blank(),
            Cell::Data(d) => d.clone(),
        }
    }

    /// File form: `_` for the blank.
    pub fn file_token(&self) -> &str {
        match self {
            Cell::Blank => "_",
            Cell::Data(d) => d.as_str(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Blank => f.write_str(BLANK),
            Cell::Data(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtmTransition {
    pub src: StateName,
    pub action: ActionLabel,
    pub read: Cell,
    pub write: Cell,
    pub movement: Move,
    pub dst: StateName,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rtm {
    pub states: BTreeSet<StateName>,
    pub actions: BTreeSet<String>,
    pub data: BTreeSet<Symbol>,
    pub transitions: Vec<RtmTransition>,
    pub initial: StateName,
    pub finals: BTreeSet<StateName>,
}

/// Tape contents modulo outer blanks: `left` never starts with a blank and
/// `right` never ends with one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TapeInstance {
    left: Vec<Cell>,
    head: Cell,
    right: Vec<Cell>,
}

impl TapeInstance {
    pub fn new(left: Vec<Cell>, head: Cell, right: Vec<Cell>) -> Self {
        let mut tape = TapeInstance { left, head, right };
        tape.canonicalize();
        tape
    }

    pub fn blank() -> Self {
        TapeInstance { left: vec![], head: Cell::Blank, right: vec![] }
    }

    pub fn left(&self) -> &[Cell] {
        &self.left
    }

    pub fn head(&self) -> &Cell {
        &self.head
    }

    pub fn right(&self) -> &[Cell] {
        &self.right
    }

    fn canonicalize(&mut self) {
        let lead = self.left.iter().take_while(|c| c.is_blank()).count();
        self.left.drain(..lead);
        while self.right.last().is_some_and(Cell::is_blank) {
            self.right.pop();
        }
    }

    pub fn len(&self) -> usize {
        self.left.len() + 1 + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes `write` under the head and moves it one cell.
    pub fn apply(&self, write: &Cell, movement: Move) -> TapeInstance {
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        let head = match movement {
            Move::L => {
                right.insert(0, write.clone());
                left.pop().unwrap_or(Cell::Blank)
            }
            Move::R => {
                left.push(write.clone());
                if right.is_empty() {
                    Cell::Blank
                } else {
                    right.remove(0)
                }
            }
        };
        TapeInstance::new(left, head, right)
    }
}

impl fmt::Display for TapeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.left {
            write!(f, "{c}.")?;
        }
        write!(f, "[{}]", self.head)?;
        for c in &self.right {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RtmConfiguration {
    pub state: StateName,
    pub tape: TapeInstance,
}

impl fmt::Display for RtmConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.state, self.tape)
    }
}

impl Rtm {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        validate_frame(&mut report, &self.states, &self.actions, &self.data, &self.initial, &self.finals);
        for (i, t) in self.transitions.iter().enumerate() {
            let symbols = [&t.read, &t.write].into_iter().filter_map(|c| match c {
                Cell::Data(d) => Some(d.clone()),
                Cell::Blank => None,
            });
            validate_edge(&mut report, i, &self.states, &self.actions, &self.data, &t.src, &t.action, &t.dst, symbols);
        }
        report
    }

    /// `(initial state, blank tape with the head on a blank)`.
    pub fn rtm_initial(&self) -> RtmConfiguration {
        RtmConfiguration { state: self.initial.clone(), tape: TapeInstance::blank() }
    }

    pub fn rtm_step(&self, cfg: &RtmConfiguration) -> Result<Vec<(ActionLabel, RtmConfiguration)>> {
        if !self.states.contains(&cfg.state) {
            return Err(Error::UnknownState(cfg.state.clone()));
        }
        let mut out: Vec<(ActionLabel, RtmConfiguration)> = Vec::new();
        for t in &self.transitions {
            if t.src != cfg.state || t.read != *cfg.tape.head() {
                continue;
            }
            let next = RtmConfiguration { state: t.dst.clone(), tape: cfg.tape.apply(&t.write, t.movement) };
            if !out.iter().any(|(a, c)| *a == t.action && *c == next) {
                out.push((t.action.clone(), next));
            }
        }
        Ok(out)
    }

    pub fn is_final(&self, cfg: &RtmConfiguration) -> bool {
        self.finals.contains(&cfg.state)
    }
}

impl ProcessGraph for Rtm {
    type Config = RtmConfiguration;

    fn root(&self) -> RtmConfiguration {
        self.rtm_initial()
    }

    fn successors(&self, c: &RtmConfiguration) -> Result<Vec<(ActionLabel, RtmConfiguration)>> {
        self.rtm_step(c)
    }

    fn is_final(&self, c: &RtmConfiguration) -> bool {
        Rtm::is_final(self, c)
    }

    fn describe(&self, c: &RtmConfiguration) -> String {
        c.to_string()
    }

    fn memory_len(&self, c: &RtmConfiguration) -> usize {
        c.tape.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Cell {
        Cell::Data(Symbol::new("x").unwrap())
    }

    fn machine(transitions: Vec<RtmTransition>, finals: &[&str]) -> Rtm {
        Rtm {
            states: ["u", "t"].iter().map(|s| s.to_string()).collect(),
            actions: ["a".to_string()].into_iter().collect(),
            data: [Symbol::new("x").unwrap()].into_iter().collect(),
            transitions,
            initial: "u".into(),
            finals: finals.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn tr(read: Cell, write: Cell, movement: Move, dst: &str) -> RtmTransition {
        RtmTransition {
            src: "u".into(),
            action: ActionLabel::visible("a").unwrap(),
            read,
            write,
            movement,
            dst: dst.into(),
        }
    }

    #[test]
    fn blank_loop_stays_on_blank_tape() {
        let m = machine(vec![tr(Cell::Blank, Cell::Blank, Move::R, "u")], &[]);
        let init = m.rtm_initial();
        let succ = m.rtm_step(&init).unwrap();
        assert_eq!(succ, vec![(ActionLabel::visible("a").unwrap(), init)]);
    }

    #[test]
    fn write_then_move_right() {
        let m = machine(vec![tr(Cell::Blank, x(), Move::R, "t")], &[]);
        let succ = m.rtm_step(&m.rtm_initial()).unwrap();
        assert_eq!(succ.len(), 1);
        let tape = &succ[0].1.tape;
        assert_eq!(tape.left(), &[x()]);
        assert_eq!(tape.head(), &Cell::Blank);
        assert!(tape.right().is_empty());
        assert_eq!(succ[0].1.to_string(), "(t,x.[□])");
    }

    #[test]
    fn read_mismatch_disables() {
        let m = machine(vec![tr(x(), x(), Move::R, "t")], &[]);
        assert!(m.rtm_step(&m.rtm_initial()).unwrap().is_empty());
    }

    #[test]
    fn initial_configuration() {
        let m = machine(vec![], &["u"]);
        let init = m.rtm_initial();
        assert_eq!(init.tape, TapeInstance::new(vec![Cell::Blank], Cell::Blank, vec![Cell::Blank]));
        assert!(m.is_final(&init));
        assert!(!machine(vec![], &[]).is_final(&init));
    }

    #[test]
    fn canonical_form_strips_outer_blanks() {
        let t = TapeInstance::new(vec![Cell::Blank, x(), Cell::Blank], x(), vec![Cell::Blank, x(), Cell::Blank]);
        assert_eq!(t.left(), &[x(), Cell::Blank]);
        assert_eq!(t.right(), &[Cell::Blank, x()]);
    }
}
