//! Process terms, actions and recursive specifications, with the `.bcp`
//! text format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, ParseError, Result};
use crate::symbol::{ActionLabel, Symbol};

pub type Port = String;

/// What travels over a port: a datum or the empty-queue probe `eps`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Data(Symbol),
    EmptyProbe,
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Data(d) => write!(f, "{d}"),
            Payload::EmptyProbe => f.write_str("eps"),
        }
    }
}

impl Payload {
    fn parse(text: &str) -> Result<Self> {
        if text == "eps" {
            Ok(Payload::EmptyProbe)
        } else {
            Ok(Payload::Data(Symbol::new(text)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CommAction {
    Send(Port, Payload),
    Receive(Port, Payload),
    Comm(Port, Payload),
    Plain(String),
    Tau,
}

impl CommAction {
    /// Reads `c!d`, `c?d`, `c(d)`, `tau` or a bare token.
    pub fn parse(token: &str) -> Result<Self> {
        let bad = || Error::InvalidAction(token.to_string());
        if token == "tau" {
            return Ok(CommAction::Tau);
        }
        if let Some(inner) = token.strip_suffix(')') {
            let (c, d) = inner.split_once('(').ok_or_else(bad)?;
            return Ok(CommAction::Comm(port(c).ok_or_else(bad)?, Payload::parse(d)?));
        }
        if let Some(i) = token.find(['!', '?']) {
            let (c, d) = (&token[..i], &token[i + 1..]);
            let c = port(c).ok_or_else(bad)?;
            let d = Payload::parse(d)?;
            return Ok(if token.as_bytes()[i] == b'!' { CommAction::Send(c, d) } else { CommAction::Receive(c, d) });
        }
        if token.is_empty() || token.contains(['(', ')']) {
            return Err(bad());
        }
        Ok(CommAction::Plain(token.to_string()))
    }

    /// Interprets an LTS label; τ stays τ.
    pub fn from_label(label: &ActionLabel) -> Result<Self> {
        match label {
            ActionLabel::Tau => Ok(CommAction::Tau),
            ActionLabel::Visible(t) => CommAction::parse(t),
        }
    }

    pub fn to_label(&self) -> ActionLabel {
        match self {
            CommAction::Tau => ActionLabel::Tau,
            other => ActionLabel::Visible(other.to_string()),
        }
    }

    pub fn port(&self) -> Option<&str> {
        match self {
            CommAction::Send(c, _) | CommAction::Receive(c, _) | CommAction::Comm(c, _) => Some(c),
            _ => None,
        }
    }
}

fn port(text: &str) -> Option<Port> {
    let ok = !text.is_empty() && text.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    ok.then(|| text.to_string())
}

impl fmt::Display for CommAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommAction::Send(c, d) => write!(f, "{c}!{d}"),
            CommAction::Receive(c, d) => write!(f, "{c}?{d}"),
            CommAction::Comm(c, d) => write!(f, "{c}({d})"),
            CommAction::Plain(a) => f.write_str(a),
            CommAction::Tau => f.write_str("tau"),
        }
    }
}

pub type Term = Rc<ProcessTerm>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTerm {
    Deadlock,
    Accept,
    Prefix(CommAction, Term),
    Choice(Term, Term),
    Merge(Term, Term),
    Encap(BTreeSet<Port>, Term),
    Hide(BTreeSet<Port>, Term),
    Var(String),
}

pub fn deadlock() -> Term {
    Rc::new(ProcessTerm::Deadlock)
}

pub fn accept() -> Term {
    Rc::new(ProcessTerm::Accept)
}

pub fn prefix(a: CommAction, p: Term) -> Term {
    Rc::new(ProcessTerm::Prefix(a, p))
}

pub fn choice(p: Term, q: Term) -> Term {
    Rc::new(ProcessTerm::Choice(p, q))
}

/// Right-nested choice of `terms`; deadlock if empty.
pub fn sum(terms: impl IntoIterator<Item = Term>) -> Term {
    let mut v: Vec<Term> = terms.into_iter().collect();
    let Some(mut acc) = v.pop() else { return deadlock() };
    while let Some(t) = v.pop() {
        acc = choice(t, acc);
    }
    acc
}

pub fn merge(p: Term, q: Term) -> Term {
    Rc::new(ProcessTerm::Merge(p, q))
}

pub fn encap<'a>(ports: impl IntoIterator<Item = &'a str>, p: Term) -> Term {
    Rc::new(ProcessTerm::Encap(ports.into_iter().map(str::to_string).collect(), p))
}

pub fn hide<'a>(ports: impl IntoIterator<Item = &'a str>, p: Term) -> Term {
    Rc::new(ProcessTerm::Hide(ports.into_iter().map(str::to_string).collect(), p))
}

pub fn var(x: impl Into<String>) -> Term {
    Rc::new(ProcessTerm::Var(x.into()))
}

// Precedence: `+` < `||` < `.`.
fn write_term(f: &mut fmt::Formatter<'_>, t: &ProcessTerm, level: u8) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>, need: bool| if need { f.write_str("(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>, need: bool| if need { f.write_str(")") } else { Ok(()) };
    match t {
        ProcessTerm::Deadlock => f.write_str("0"),
        ProcessTerm::Accept => f.write_str("1"),
        ProcessTerm::Var(x) => f.write_str(x),
        ProcessTerm::Prefix(a, p) => {
            write!(f, "{a}.")?;
            write_term(f, p, 2)
        }
        ProcessTerm::Choice(p, q) => {
            open(f, level > 0)?;
            write_term(f, p, 1)?;
            f.write_str(" + ")?;
            write_term(f, q, 0)?;
            close(f, level > 0)
        }
        ProcessTerm::Merge(p, q) => {
            open(f, level > 1)?;
            write_term(f, p, 2)?;
            f.write_str(" || ")?;
            write_term(f, q, 1)?;
            close(f, level > 1)
        }
        ProcessTerm::Encap(c, p) | ProcessTerm::Hide(c, p) => {
            let op = if matches!(t, ProcessTerm::Encap(..)) { "encap" } else { "hide" };
            let ports: Vec<&str> = c.iter().map(String::as_str).collect();
            write!(f, "{op}({{{}}}, ", ports.join(","))?;
            write_term(f, p, 0)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

/// Defining equations `X = p`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecursiveSpec {
    pub equations: BTreeMap<String, Term>,
}

impl RecursiveSpec {
    pub fn get(&self, x: &str) -> Result<&Term> {
        self.equations.get(x).ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }

    /// Checks that every variable used on a right-hand side (or in `extra`)
    /// is defined.
    pub fn check_closed<'a>(&'a self, extra: impl IntoIterator<Item = &'a Term>) -> Result<()> {
        let mut seen = BTreeSet::new();
        let mut todo: Vec<&Term> = self.equations.values().chain(extra).collect();
        while let Some(t) = todo.pop() {
            match &**t {
                ProcessTerm::Deadlock | ProcessTerm::Accept => {}
                ProcessTerm::Var(x) => {
                    if seen.insert(x.clone()) {
                        self.get(x)?;
                    }
                }
                ProcessTerm::Prefix(_, p) | ProcessTerm::Encap(_, p) | ProcessTerm::Hide(_, p) => todo.push(p),
                ProcessTerm::Choice(p, q) | ProcessTerm::Merge(p, q) => {
                    todo.push(p);
                    todo.push(q);
                }
            }
        }
        Ok(())
    }
}

/// A parsed `.bcp` file: the equations and the process of the first one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcpFile {
    pub spec: RecursiveSpec,
    pub root: Term,
}

pub fn bcp_to_text(file: &BcpFile) -> String {
    let mut out = String::new();
    let root = match &*file.root {
        ProcessTerm::Var(x) if file.spec.equations.contains_key(x) => Some(x.clone()),
        _ => None,
    };
    if root.is_none() {
        out.push_str(&format!("main = {}\n", file.root));
    }
    let mut order: Vec<&String> = file.spec.equations.keys().collect();
    if let Some(r) = &root {
        order.sort_by_key(|x| *x != r);
    }
    for x in order {
        out.push_str(&format!("{x} = {}\n", file.spec.equations[x]));
    }
    out
}

/// Parses equations `X = term`, one per line; a line that does not start
/// with `identifier =` continues the previous equation. The first equation
/// names the root.
pub fn parse_bcp(text: &str) -> Result<BcpFile> {
    let mut eqs: Vec<(String, usize, usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let head = line.split_once('=').map(|(l, _)| l.trim()).filter(|l| is_ident(l));
        match head {
            Some(x) => {
                let eq = line.find('=').unwrap();
                eqs.push((x.to_string(), n + 1, eq + 2, line[eq + 1..].to_string()));
            }
            None => match eqs.last_mut() {
                Some(e) => {
                    e.3.push(' ');
                    e.3.push_str(line);
                }
                None => return Err(ParseError::new(n + 1, 1, "expected 'X = term'").into()),
            },
        }
    }
    let mut spec = RecursiveSpec::default();
    let mut root = None;
    for (x, line, col, body) in eqs {
        let t = parse_term_at(&body, line, col)?;
        if spec.equations.insert(x.clone(), t).is_some() {
            return Err(ParseError::new(line, 1, format!("variable '{x}' defined twice")).into());
        }
        root.get_or_insert(x);
    }
    let root = root.ok_or_else(|| ParseError::new(1, 1, "no equations"))?;
    spec.check_closed([])?;
    Ok(BcpFile { spec, root: var(root) })
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse_term(text: &str) -> Result<Term> {
    parse_term_at(text, 1, 1)
}

fn parse_term_at(text: &str, line: usize, col: usize) -> Result<Term> {
    let toks = lex(text, line, col)?;
    let mut p = TermParser { toks, pos: 0, line, col };
    let t = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(&'static str),
}

fn lex(text: &str, line: usize, col: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let at = col + text[..off].chars().count();
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let punct = ["||", "+", ".", "(", ")", "{", "}", ","].into_iter().find(|p| text[off..].starts_with(p));
        if let Some(p) = punct {
            toks.push((Tok::Punct(p), at));
            i += p.chars().count();
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].1.is_whitespace() && !".+|(){},=".contains(chars[i].1) {
            i += 1;
        }
        if i == start {
            return Err(ParseError::new(line, at, format!("unexpected '{c}'")).into());
        }
        let end = chars.get(i).map_or(text.len(), |(o, _)| *o);
        toks.push((Tok::Word(text[off..end].to_string()), at));
    }
    Ok(toks)
}

struct TermParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col: usize,
}

impl TermParser {
    fn error(&self, msg: &str) -> Error {
        let col = self.toks.get(self.pos).map_or(self.col, |t| t.1);
        ParseError::new(self.line, col, msg).into()
    }

    fn peek(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(0), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{p}'")))
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let p = self.merge()?;
        if self.eat("+") {
            Ok(choice(p, self.expr()?))
        } else {
            Ok(p)
        }
    }

    fn merge(&mut self) -> Result<Term> {
        let p = self.prefix()?;
        if self.eat("||") {
            Ok(merge(p, self.merge()?))
        } else {
            Ok(p)
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.peek(0) {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn prefix(&mut self) -> Result<Term> {
        match self.peek(0).cloned() {
            Some(Tok::Word(w)) if (w == "encap" || w == "hide") && self.peek(1) == Some(&Tok::Punct("(")) => {
                self.pos += 2;
                let ports = self.ports()?;
                self.expect(",")?;
                let p = self.expr()?;
                self.expect(")")?;
                let ports = ports.iter().map(String::as_str);
                Ok(if w == "encap" { encap(ports, p) } else { hide(ports, p) })
            }
            Some(Tok::Word(w)) if w == "0" => {
                self.pos += 1;
                Ok(deadlock())
            }
            Some(Tok::Word(w)) if w == "1" => {
                self.pos += 1;
                Ok(accept())
            }
            Some(Tok::Word(w)) => {
                let at = self.pos;
                self.pos += 1;
                let mut token = w;
                // `c(d)` is a communication action.
                if self.peek(0) == Some(&Tok::Punct("(")) {
                    self.pos += 1;
                    let d = self.word()?;
                    self.expect(")")?;
                    token = format!("{token}({d})");
                }
                if self.eat(".") {
                    let a = CommAction::parse(&token).map_err(|e| {
                        self.pos = at;
                        self.error(&e.to_string())
                    })?;
                    return Ok(prefix(a, self.prefix()?));
                }
                if !is_ident(&token) {
                    self.pos = at;
                    return Err(self.error("expected '.' after action"));
                }
                Ok(var(token))
            }
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => Err(self.error("expected a term")),
        }
    }

    fn ports(&mut self) -> Result<Vec<String>> {
        if !self.eat("{") {
            return Ok(vec![self.word()?]);
        }
        let mut ports = Vec::new();
        if self.eat("}") {
            return Ok(ports);
        }
        loop {
            ports.push(self.word()?);
            if self.eat("}") {
                return Ok(ports);
            }
            self.expect(",")?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_round_trip() {
        for t in ["c!d", "c?d", "c(d)", "o!eps", "tau", "a", "i!$"] {
            assert_eq!(CommAction::parse(t).unwrap().to_string(), t);
        }
        assert_eq!(CommAction::parse("o?eps").unwrap(), CommAction::Receive("o".into(), Payload::EmptyProbe));
        assert!(CommAction::parse("!d").is_err());
    }

    #[test]
    fn printing_is_reparsable() {
        let texts = [
            "a.1 + b.1",
            "(a.1 + b.0) || c!d.X",
            "hide({c}, encap({c}, c!d.1 || c?d.1))",
            "a.(b.1 || c.1)",
            "a.(b.1 + c.1) + 0",
            "c(d).1",
        ];
        for text in texts {
            let t = parse_term(text).unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn bare_port_in_encap() {
        assert_eq!(parse_term("encap(c, 1)").unwrap(), encap(["c"], accept()));
    }

    #[test]
    fn spec_file() {
        let f = parse_bcp("# counter\nX = a.Y\n  + 1\nY = b.X\n").unwrap();
        assert_eq!(f.root, var("X"));
        assert_eq!(f.spec.equations["X"].to_string(), "a.Y + 1");
        assert_eq!(parse_bcp(&bcp_to_text(&f)).unwrap(), f);
    }

    #[test]
    fn unbound_variable() {
        assert!(matches!(parse_bcp("X = a.Z\n"), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn error_position() {
        match parse_bcp("X = a.1\nY = b. + 1\n") {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.column), (2, 8)),
            other => panic!("{other:?}"),
        }
    }
}
