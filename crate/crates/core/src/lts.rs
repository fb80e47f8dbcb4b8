//! Finite, depth-bounded fragments of process graphs.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::symbol::ActionLabel;

/// Anything with a root configuration and a set-valued step function.
pub trait ProcessGraph {
    type Config: Clone;

    fn root(&self) -> Self::Config;
    fn successors(&self, c: &Self::Config) -> Result<Vec<(ActionLabel, Self::Config)>>;
    fn is_final(&self, c: &Self::Config) -> bool;
    /// Canonical printed form; two configurations are the same state iff
    /// their descriptions are equal.
    fn describe(&self, c: &Self::Config) -> String;
    /// Size of the memory (queue or tape) used by `max_queue_len`.
    fn memory_len(&self, _c: &Self::Config) -> usize {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplorationBound {
    /// Transitions from the root.
    pub max_depth: usize,
    pub max_states: usize,
    /// `None` means unbounded.
    pub max_queue_len: Option<usize>,
}

impl ExplorationBound {
    pub const DEFAULT_MAX_STATES: usize = 200_000;

    pub fn depth(max_depth: usize) -> Self {
        ExplorationBound { max_depth, max_states: Self::DEFAULT_MAX_STATES, max_queue_len: None }
    }

    pub fn with_queue(mut self, len: usize) -> Self {
        self.max_queue_len = Some(len);
        self
    }

    pub fn with_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }
}

impl Default for ExplorationBound {
    fn default() -> Self {
        ExplorationBound::depth(10)
    }
}

/// A finite labelled transition system with a root. Frontier states were cut
/// by a bound: they have no outgoing edges although the full graph may.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLts {
    pub states: Vec<String>,
    pub out: Vec<Vec<(ActionLabel, usize)>>,
    pub root: usize,
    pub finals: Vec<bool>,
    pub frontier: Vec<bool>,
}

impl FiniteLts {
    /// A single root state without edges.
    pub fn singleton(desc: impl Into<String>, is_final: bool) -> Self {
        FiniteLts {
            states: vec![desc.into()],
            out: vec![vec![]],
            root: 0,
            finals: vec![is_final],
            frontier: vec![false],
        }
    }

    /// Builds an LTS from `n` anonymous states and an edge list.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, ActionLabel, usize)>,
        root: usize,
        finals: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut out = vec![Vec::new(); n];
        for (s, a, t) in edges {
            out[s].push((a, t));
        }
        let mut fin = vec![false; n];
        for f in finals {
            fin[f] = true;
        }
        let mut lts = FiniteLts {
            states: (0..n).map(|i| format!("s{i}")).collect(),
            out,
            root,
            finals: fin,
            frontier: vec![false; n],
        };
        lts.canonicalize_edges();
        lts
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, &ActionLabel, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, es)| es.iter().map(move |(a, t)| (s, a, *t)))
    }

    pub fn has_frontier(&self) -> bool {
        self.frontier.iter().any(|&f| f)
    }

    pub fn state_index(&self, desc: &str) -> Option<usize> {
        self.states.iter().position(|s| s == desc)
    }

    pub fn labels(&self) -> BTreeSet<ActionLabel> {
        self.edges().map(|(_, a, _)| a.clone()).collect()
    }

    pub(crate) fn canonicalize_edges(&mut self) {
        for es in &mut self.out {
            es.sort();
            es.dedup();
        }
    }

    /// States reachable from the root, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut order = vec![self.root];
        seen[self.root] = true;
        let mut i = 0;
        while i < order.len() {
            for (_, t) in &self.out[order[i]] {
                if !seen[*t] {
                    seen[*t] = true;
                    order.push(*t);
                }
            }
            i += 1;
        }
        order
    }

    /// `.lts` text dump.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "root: {}", self.root);
        for (i, d) in self.states.iter().enumerate() {
            let _ = write!(out, "state: {i} {}", d.replace(char::is_whitespace, "_"));
            if self.finals[i] {
                out.push_str(" final");
            }
            if self.frontier[i] {
                out.push_str(" frontier");
            }
            out.push('\n');
        }
        for (s, a, t) in self.edges() {
            let _ = writeln!(out, "edge: {s} {a} {t}");
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, ParseError> {
        let mut states: Vec<(usize, String, bool, bool)> = Vec::new();
        let mut edges = Vec::new();
        let mut root = None;
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) =
                line.split_once(':').ok_or_else(|| ParseError::new(line_no, 1, "expected 'key: value'"))?;
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let num = |s: &str, col: usize| {
                s.parse::<usize>().map_err(|_| ParseError::new(line_no, col, format!("expected index, found '{s}'")))
            };
            match key {
                "root" if parts.len() == 1 => root = Some(num(parts[0], key.len() + 2)?),
                "state" if parts.len() >= 2 => {
                    let flags = &parts[2..];
                    if let Some(bad) = flags.iter().find(|f| !matches!(**f, "final" | "frontier")) {
                        return Err(ParseError::new(line_no, 1, format!("unknown state flag '{bad}'")));
                    }
                    states.push((
                        num(parts[0], 8)?,
                        parts[1].to_string(),
                        flags.contains(&"final"),
                        flags.contains(&"frontier"),
                    ));
                }
                "edge" if parts.len() == 3 => {
                    let label = ActionLabel::parse(parts[1]).map_err(|e| ParseError::new(line_no, 7, e.to_string()))?;
                    edges.push((num(parts[0], 7)?, label, num(parts[2], 7)?, line_no));
                }
                _ => return Err(ParseError::new(line_no, 1, format!("malformed '{key}' line"))),
            }
        }
        states.sort_by_key(|s| s.0);
        for (i, s) in states.iter().enumerate() {
            if s.0 != i {
                return Err(ParseError::new(0, 0, format!("state indices must be 0..n, missing {i}")));
            }
        }
        let n = states.len();
        let root = root.ok_or_else(|| ParseError::new(0, 0, "missing root"))?;
        if root >= n {
            return Err(ParseError::new(0, 0, "root out of range"));
        }
        let mut out = vec![Vec::new(); n];
        for (s, a, t, line_no) in edges {
            if s >= n || t >= n {
                return Err(ParseError::new(line_no, 7, "edge endpoint out of range"));
            }
            out[s].push((a, t));
        }
        let mut lts = FiniteLts {
            states: states.iter().map(|s| s.1.clone()).collect(),
            out,
            root,
            finals: states.iter().map(|s| s.2).collect(),
            frontier: states.iter().map(|s| s.3).collect(),
        };
        lts.canonicalize_edges();
        Ok(lts)
    }
}

/// Breadth-first truncation of `graph` under `bound`.
pub fn explore<G: ProcessGraph>(graph: &G, bound: ExplorationBound) -> Result<FiniteLts> {
    explore_with_configs(graph, bound).map(|(lts, _)| lts)
}

/// Like [`explore`], also returning the configuration behind each state.
pub fn explore_with_configs<G: ProcessGraph>(
    graph: &G,
    bound: ExplorationBound,
) -> Result<(FiniteLts, Vec<G::Config>)> {
    let root = graph.root();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut configs = vec![root.clone()];
    let mut states = vec![graph.describe(&root)];
    let mut depth = vec![0usize];
    index.insert(states[0].clone(), 0);

    let mut out: Vec<Vec<(ActionLabel, usize)>> = vec![Vec::new()];
    let mut frontier = vec![false];
    let mut current = 0;
    while current < states.len() {
        let succ = graph.successors(&configs[current])?;
        if succ.is_empty() {
            current += 1;
            continue;
        }
        let too_deep = depth[current] >= bound.max_depth;
        let too_long = bound.max_queue_len.is_some_and(|k| succ.iter().any(|(_, c)| graph.memory_len(c) > k));
        if too_deep || too_long {
            frontier[current] = true;
            current += 1;
            continue;
        }
        let descs: Vec<String> = succ.iter().map(|(_, c)| graph.describe(c)).collect();
        let fresh: HashSet<&String> = descs.iter().filter(|d| !index.contains_key(*d)).collect();
        if states.len() + fresh.len() > bound.max_states {
            if current == 0 {
                return Err(Error::RootUnexpandable(bound.max_states));
            }
            frontier[current] = true;
            current += 1;
            continue;
        }
        for ((label, cfg), desc) in succ.into_iter().zip(descs) {
            let target = match index.get(&desc) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    index.insert(desc.clone(), t);
                    states.push(desc);
                    configs.push(cfg);
                    depth.push(depth[current] + 1);
                    out.push(Vec::new());
                    frontier.push(false);
                    t
                }
            };
            out[current].push((label, target));
        }
        current += 1;
    }
    let finals = configs.iter().map(|c| graph.is_final(c)).collect();
    let mut lts = FiniteLts { states, out, root: 0, finals, frontier };
    lts.canonicalize_edges();
    Ok((lts, configs))
}

/// All τ-erased words of length `<= max_len` that label a path from the root
/// to a final, non-frontier state.
pub fn completed_traces(lts: &FiniteLts, max_len: usize) -> BTreeSet<Vec<String>> {
    let mut result = BTreeSet::new();
    let mut seen: HashSet<(usize, Vec<String>)> = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((lts.root, Vec::<String>::new()));
    seen.insert((lts.root, Vec::new()));
    while let Some((s, word)) = queue.pop_front() {
        if lts.finals[s] && !lts.frontier[s] {
            result.insert(word.clone());
        }
        for (a, t) in &lts.out[s] {
            let next = match a {
                ActionLabel::Tau => word.clone(),
                ActionLabel::Visible(tok) => {
                    if word.len() == max_len {
                        continue;
                    }
                    let mut w = word.clone();
                    w.push(tok.clone());
                    w
                }
            };
            if seen.insert((*t, next.clone())) {
                queue.push_back((*t, next));
            }
        }
    }
    result
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeterminismVerdict {
    /// No violation among the expanded states.
    DeterministicUpToBound,
    Violation {
        state: usize,
        description: String,
        reason: String,
    },
}

impl DeterminismVerdict {
    pub fn is_deterministic(&self) -> bool {
        matches!(self, DeterminismVerdict::DeterministicUpToBound)
    }
}

fn state_violation(lts: &FiniteLts, s: usize) -> Option<String> {
    let edges = &lts.out[s];
    for (i, (a, t)) in edges.iter().enumerate() {
        if let Some((_, u)) = edges[i + 1..].iter().find(|(b, u)| b == a && u != t) {
            return Some(format!("two {a}-successors: {} and {}", lts.states[*t], lts.states[*u]));
        }
    }
    let has_tau = edges.iter().any(|(a, _)| a.is_tau());
    if has_tau {
        if let Some((a, _)) = edges.iter().find(|(a, _)| !a.is_tau()) {
            return Some(format!("both a tau-step and a {a}-step"));
        }
    }
    None
}

/// Every non-frontier state violating determinism, in index order.
pub fn determinism_violations(lts: &FiniteLts) -> Vec<(usize, String)> {
    (0..lts.len()).filter(|&s| !lts.frontier[s]).filter_map(|s| state_violation(lts, s).map(|r| (s, r))).collect()
}

pub fn is_deterministic(lts: &FiniteLts) -> DeterminismVerdict {
    match determinism_violations(lts).into_iter().next() {
        None => DeterminismVerdict::DeterministicUpToBound,
        Some((state, reason)) => {
            DeterminismVerdict::Violation { state, description: lts.states[state].clone(), reason }
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: finals double-circled, frontier dashed, root marked by
/// an incoming arrow.
pub fn to_dot(lts: &FiniteLts) -> String {
    let mut out = String::from("digraph lts {\n  rankdir=LR;\n  __root [shape=point];\n");
    let _ = writeln!(out, "  __root -> n{};", lts.root);
    for (i, d) in lts.states.iter().enumerate() {
        let shape = if lts.finals[i] { "doublecircle" } else { "circle" };
        let style = if lts.frontier[i] { ", style=dashed" } else { "" };
        let _ = writeln!(out, "  n{i} [label=\"{}\", shape={shape}{style}];", dot_escape(d));
    }
    for (s, a, t) in lts.edges() {
        let _ = writeln!(out, "  n{s} -> n{t} [label=\"{}\"];", dot_escape(a.token()));
    }
    out.push_str("}\n");
    out
}
