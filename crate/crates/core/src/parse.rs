//! Line-oriented text formats `.qa`, `.qa2` and `.rtm`.
//!
//! ```text
//! qa
//! data: a b
//! actions: a b
//! states: s0 s1 s2
//! initial: s0
//! finals: s2
//! trans: s0 a any a s0        # <src> <action|tau> <trigger> <enqueue> <dst>
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automaton::{QTransition, QueueAutomaton};
use crate::error::{Error, ParseError, Result};
use crate::rtm::{Cell, Move, Rtm, RtmTransition};
use crate::symbol::{parse_word, validate_action_token, word_to_file, ActionLabel, Symbol, Trigger, Word};
use crate::two_queue::{QTransition2, TwoQueueAutomaton};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((s, sc)) = start.take() {
                out.push(Token { text: &line[s..i], column: sc + 1 });
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, sc)) = start {
        out.push(Token { text: &line[s..], column: sc + 1 });
    }
    out
}

#[derive(Default)]
struct Frame {
    data: BTreeSet<Symbol>,
    actions: BTreeSet<String>,
    states: BTreeSet<String>,
    initial: Option<String>,
    finals: BTreeSet<String>,
}

/// Splits a file into its header keyword, frame, and `trans:` lines (with
/// their line numbers and tokens after the key).
fn parse_frame<'a>(
    text: &'a str,
    header: &str,
    symbol: impl Fn(&str) -> Result<Symbol>,
) -> Result<(Frame, Vec<(usize, Vec<Token<'a>>)>), ParseError> {
    let mut frame = Frame::default();
    let mut trans = Vec::new();
    let mut seen_header = false;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(first) = toks.first() else { continue };
        let (first_text, first_col) = (first.text, first.column);
        if !seen_header {
            if toks.len() != 1 || first_text != header {
                return Err(ParseError::new(line_no, first_col, format!("expected header '{header}'")));
            }
            seen_header = true;
            continue;
        }
        let Some(key) = first_text.strip_suffix(':') else {
            return Err(ParseError::new(line_no, first_col, format!("expected 'key:', found '{first_text}'")));
        };
        let rest: Vec<Token<'a>> = toks.into_iter().skip(1).collect();
        match key {
            "data" => {
                for t in &rest {
                    let s = symbol(t.text).map_err(|e| ParseError::new(line_no, t.column, e.to_string()))?;
                    frame.data.insert(s);
                }
            }
            "actions" => {
                for t in &rest {
                    validate_action_token(t.text).map_err(|e| ParseError::new(line_no, t.column, e.to_string()))?;
                    frame.actions.insert(t.text.to_string());
                }
            }
            "states" => frame.states.extend(rest.iter().map(|t| t.text.to_string())),
            "finals" => frame.finals.extend(rest.iter().map(|t| t.text.to_string())),
            "initial" => {
                if rest.len() != 1 {
                    return Err(ParseError::new(line_no, first_col, "expected exactly one initial state"));
                }
                frame.initial = Some(rest[0].text.to_string());
            }
            "trans" => trans.push((line_no, rest)),
            other => return Err(ParseError::new(line_no, first_col, format!("unknown key '{other}'"))),
        }
    }
    if !seen_header {
        return Err(ParseError::new(1, 1, format!("missing header '{header}'")));
    }
    Ok((frame, trans))
}

fn field<T>(line: usize, tok: &Token<'_>, r: Result<T>) -> Result<T, ParseError> {
    r.map_err(|e| ParseError::new(line, tok.column, e.to_string()))
}

fn expect_arity(line: usize, toks: &[Token<'_>], n: usize) -> Result<(), ParseError> {
    if toks.len() != n {
        let col = toks.last().map_or(1, |t| t.column);
        return Err(ParseError::new(line, col, format!("expected {n} fields after 'trans:', found {}", toks.len())));
    }
    Ok(())
}

fn finish_initial(frame: &Frame) -> Result<String, ParseError> {
    frame.initial.clone().ok_or_else(|| ParseError::new(0, 0, "missing 'initial:' line"))
}

pub fn parse_qa(text: &str) -> Result<QueueAutomaton> {
    let (frame, trans) = parse_frame(text, "qa", |s| Symbol::new(s))?;
    let mut transitions = Vec::new();
    for (line, t) in trans {
        expect_arity(line, &t, 5)?;
        transitions.push(QTransition {
            src: t[0].text.to_string(),
            action: field(line, &t[1], ActionLabel::parse(t[1].text))?,
            trigger: field(line, &t[2], Trigger::parse(t[2].text))?,
            enqueue: field(line, &t[3], parse_word(t[3].text))?,
            dst: t[4].text.to_string(),
        });
    }
    let qa = QueueAutomaton {
        initial: finish_initial(&frame)?,
        states: frame.states,
        actions: frame.actions,
        data: frame.data,
        transitions,
        finals: frame.finals,
    };
    qa.validate().into_result()?;
    Ok(qa)
}

fn split_pair<'a>(line: usize, tok: &Token<'a>) -> Result<(&'a str, &'a str), ParseError> {
    tok.text
        .split_once(',')
        .ok_or_else(|| ParseError::new(line, tok.column, format!("expected a pair 'x,y', found '{}'", tok.text)))
}

pub fn parse_qa2(text: &str) -> Result<TwoQueueAutomaton> {
    let (frame, trans) = parse_frame(text, "qa2", |s| Symbol::new(s))?;
    let mut transitions = Vec::new();
    for (line, t) in trans {
        expect_arity(line, &t, 5)?;
        let (t1, t2) = split_pair(line, &t[2])?;
        let (e1, e2) = split_pair(line, &t[3])?;
        transitions.push(QTransition2 {
            src: t[0].text.to_string(),
            action: field(line, &t[1], ActionLabel::parse(t[1].text))?,
            triggers: (field(line, &t[2], Trigger::parse(t1))?, field(line, &t[2], Trigger::parse(t2))?),
            enqueues: (field(line, &t[3], parse_word(e1))?, field(line, &t[3], parse_word(e2))?),
            dst: t[4].text.to_string(),
        });
    }
    let qa = TwoQueueAutomaton {
        initial: finish_initial(&frame)?,
        states: frame.states,
        actions: frame.actions,
        data: frame.data,
        transitions,
        finals: frame.finals,
    };
    qa.validate().into_result()?;
    Ok(qa)
}

fn rtm_symbol(s: &str) -> Result<Symbol> {
    if s == "_" {
        return Err(Error::InvalidSymbol("_ (the blank is implicit)".into()));
    }
    Symbol::new(s)
}

fn parse_cell(s: &str) -> Result<Cell> {
    if s == "_" {
        Ok(Cell::Blank)
    } else {
        Ok(Cell::Data(Symbol::new(s)?))
    }
}

pub fn parse_rtm(text: &str) -> Result<Rtm> {
    let (frame, trans) = parse_frame(text, "rtm", rtm_symbol)?;
    let mut transitions = Vec::new();
    for (line, t) in trans {
        expect_arity(line, &t, 6)?;
        let movement = match t[4].text {
            "L" => Move::L,
            "R" => Move::R,
            other => return Err(ParseError::new(line, t[4].column, format!("expected L or R, found '{other}'")).into()),
        };
        transitions.push(RtmTransition {
            src: t[0].text.to_string(),
            action: field(line, &t[1], ActionLabel::parse(t[1].text))?,
            read: field(line, &t[2], parse_cell(t[2].text))?,
            write: field(line, &t[3], parse_cell(t[3].text))?,
            movement,
            dst: t[5].text.to_string(),
        });
    }
    let m = Rtm {
        initial: finish_initial(&frame)?,
        states: frame.states,
        actions: frame.actions,
        data: frame.data,
        transitions,
        finals: frame.finals,
    };
    m.validate().into_result()?;
    Ok(m)
}

fn frame_text(
    out: &mut String,
    header: &str,
    data: &BTreeSet<Symbol>,
    actions: &BTreeSet<String>,
    states: &BTreeSet<String>,
    initial: &str,
    finals: &BTreeSet<String>,
) {
    let join = |it: Vec<String>| it.join(" ");
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "data: {}", join(data.iter().map(|d| d.to_string()).collect()));
    let _ = writeln!(out, "actions: {}", join(actions.iter().cloned().collect()));
    let _ = writeln!(out, "states: {}", join(states.iter().cloned().collect()));
    let _ = writeln!(out, "initial: {initial}");
    let _ = writeln!(out, "finals: {}", join(finals.iter().cloned().collect()));
}

pub fn qa_to_text(qa: &QueueAutomaton) -> String {
    let mut out = String::new();
    frame_text(&mut out, "qa", &qa.data, &qa.actions, &qa.states, &qa.initial, &qa.finals);
    for t in &qa.transitions {
        let _ = writeln!(out, "trans: {} {} {} {} {}", t.src, t.action, t.trigger, word_to_file(&t.enqueue), t.dst);
    }
    out
}

pub fn qa2_to_text(qa: &TwoQueueAutomaton) -> String {
    let mut out = String::new();
    frame_text(&mut out, "qa2", &qa.data, &qa.actions, &qa.states, &qa.initial, &qa.finals);
    let w = |w: &Word| word_to_file(w);
    for t in &qa.transitions {
        let _ = writeln!(
            out,
            "trans: {} {} {},{} {},{} {}",
            t.src,
            t.action,
            t.triggers.0,
            t.triggers.1,
            w(&t.enqueues.0),
            w(&t.enqueues.1),
            t.dst
        );
    }
    out
}

pub fn rtm_to_text(m: &Rtm) -> String {
    let mut out = String::new();
    frame_text(&mut out, "rtm", &m.data, &m.actions, &m.states, &m.initial, &m.finals);
    for t in &m.transitions {
        let mv = match t.movement {
            Move::L => "L",
            Move::R => "R",
        };
        let _ = writeln!(
            out,
            "trans: {} {} {} {} {} {}",
            t.src,
            t.action,
            t.read.file_token(),
            t.write.file_token(),
            mv,
            t.dst
        );
    }
    out
}
