//! Data symbols, action labels and queue triggers shared by every machine model.

use std::fmt;

use crate::error::{Error, Result};

/// Tokens with a fixed meaning in the text formats; none of them can name a symbol.
pub const RESERVED_TOKENS: [&str; 4] = ["eps", "any", "tau", "-"];

/// Bookmark symbol introduced by the queue-rotation gadgets.
pub const BOOKMARK: &str = "$";
/// Separator symbol used to encode two queues (or a tape) in one queue.
pub const SEPARATOR: &str = "≬";
/// The blank tape symbol once it is treated as ordinary queue data.
pub const BLANK: &str = "□";

fn forbidden_char(c: char) -> bool {
    c.is_whitespace() || matches!(c, '.' | ',' | '#' | '(' | ')' | '[' | ']' | '{' | '}' | '|' | '=')
}

/// An element of a data alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty()
            || RESERVED_TOKENS.contains(&name.as_str())
            || name.chars().any(|c| forbidden_char(c) || c == '!' || c == '?')
        {
            return Err(Error::InvalidSymbol(name));
        }
        Ok(Symbol(name))
    }

    /// Builds a symbol known to be valid, e.g. one of the reserved gadget symbols.
    pub(crate) fn raw(name: &str) -> Self {
        Symbol(name.to_string())
    }

    pub fn bookmark() -> Self {
        Symbol::raw(BOOKMARK)
    }

    pub fn separator() -> Self {
        Symbol::raw(SEPARATOR)
    }

    pub fn blank() -> Self {
        Symbol::raw(BLANK)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A transition label: a visible action token or the silent step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionLabel {
    Visible(String),
    Tau,
}

impl ActionLabel {
    pub fn visible(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        validate_action_token(&token)?;
        Ok(ActionLabel::Visible(token))
    }

    /// Parses `tau` as the silent step and anything else as a visible token.
    pub fn parse(token: &str) -> Result<Self> {
        if token == "tau" {
            Ok(ActionLabel::Tau)
        } else {
            ActionLabel::visible(token)
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, ActionLabel::Tau)
    }

    pub fn token(&self) -> &str {
        match self {
            ActionLabel::Visible(t) => t,
            ActionLabel::Tau => "tau",
        }
    }
}

pub fn validate_action_token(token: &str) -> Result<()> {
    if token.is_empty() || token == "tau" || token.chars().any(forbidden_char) {
        return Err(Error::InvalidAction(token.to_string()));
    }
    Ok(())
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// What a queue transition requires of the queue before it fires.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trigger {
    /// The head of the queue is this symbol; it is dequeued.
    Head(Symbol),
    /// The queue is empty.
    Empty,
    /// Fires irrespective of the queue contents, dequeuing nothing.
    Any,
}

impl Trigger {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "eps" => Ok(Trigger::Empty),
            "any" => Ok(Trigger::Any),
            other => Ok(Trigger::Head(Symbol::new(other)?)),
        }
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Trigger::Head(d) => Some(d),
            _ => None,
        }
    }

    /// Applies the trigger to a queue word (head at the end). Returns the
    /// remaining word, or `None` when the trigger is not enabled.
    pub fn apply(&self, queue: &[Symbol]) -> Option<Vec<Symbol>> {
        match self {
            Trigger::Any => Some(queue.to_vec()),
            Trigger::Empty => queue.is_empty().then(Vec::new),
            Trigger::Head(d) => match queue.split_last() {
                Some((head, rest)) if head == d => Some(rest.to_vec()),
                _ => None,
            },
        }
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trigger::Head(d) => write!(f, "{d}"),
            Trigger::Empty => f.write_str("eps"),
            Trigger::Any => f.write_str("any"),
        }
    }
}

/// A word over a data alphabet. Index 0 is the leftmost symbol; for queues the
/// head is the LAST element and enqueued blocks are prepended.
pub type Word = Vec<Symbol>;

/// Parses `-` as the empty word and `d1.d2.....dn` otherwise.
pub fn parse_word(text: &str) -> Result<Word> {
    if text == "-" {
        return Ok(Vec::new());
    }
    text.split('.').map(Symbol::new).collect()
}

/// File form of a word: `-` when empty.
pub fn word_to_file(word: &[Symbol]) -> String {
    if word.is_empty() {
        "-".to_string()
    } else {
        join_word(word)
    }
}

/// Display form of a word: `ε` when empty.
pub fn word_to_display(word: &[Symbol]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        join_word(word)
    }
}

fn join_word(word: &[Symbol]) -> String {
    let mut out = String::new();
    for (i, s) in word.iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        out.push_str(s.as_str());
    }
    out
}

/// `block · rest`: the result of enqueueing `block` onto a queue holding `rest`.
pub fn prepend(block: &[Symbol], rest: &[Symbol]) -> Word {
    let mut out = Vec::with_capacity(block.len() + rest.len());
    out.extend_from_slice(block);
    out.extend_from_slice(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn reserved_tokens_are_not_symbols() {
        for t in RESERVED_TOKENS {
            assert!(Symbol::new(t).is_err());
        }
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("a b").is_err());
        assert!(Symbol::new("$").is_ok());
        assert!(Symbol::new("≬").is_ok());
    }

    #[test]
    fn trigger_reads_head_on_the_right() {
        let q = w("b.a");
        assert_eq!(Trigger::parse("a").unwrap().apply(&q), Some(w("b")));
        assert_eq!(Trigger::parse("b").unwrap().apply(&q), None);
        assert_eq!(Trigger::Empty.apply(&q), None);
        assert_eq!(Trigger::Empty.apply(&[]), Some(vec![]));
        assert_eq!(Trigger::Any.apply(&q), Some(q.clone()));
    }

    #[test]
    fn tau_label_prints_as_tau() {
        assert_eq!(ActionLabel::parse("tau").unwrap(), ActionLabel::Tau);
        assert_eq!(ActionLabel::Tau.to_string(), "tau");
        assert!(ActionLabel::visible("").is_err());
    }

    #[test]
    fn word_forms() {
        assert_eq!(word_to_file(&[]), "-");
        assert_eq!(word_to_display(&[]), "ε");
        assert_eq!(word_to_file(&w("a.$.b")), "a.$.b");
        assert_eq!(prepend(&w("x"), &w("a.b")), w("x.a.b"));
    }
}
