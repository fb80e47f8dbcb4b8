//! A queue automaton split into a finite control and a queue it talks to.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::queue::{queue_spec, queue_var};
use super::term::{accept, encap, hide, merge, prefix, sum, var, CommAction, Payload, Port, RecursiveSpec, Term};
use crate::automaton::{QConfiguration, QueueAutomaton};
use crate::error::{Error, Result};
use crate::lts::{FiniteLts, ProcessGraph};
use crate::symbol::{word_to_display, ActionLabel, Symbol, Trigger};

/// A finite control with the ports it uses to reach the queue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Control {
    pub lts: FiniteLts,
    /// The control sends `input!d` to enqueue `d`.
    pub input: Port,
    /// The control receives `output?d` to dequeue `d`, `output?eps` on empty.
    pub output: Port,
    /// The automaton's data alphabet (without `$`).
    pub data: BTreeSet<Symbol>,
}

/// Picks queue ports `i`/`o`, or `qi`/`qo`, `qi1`/`qo1`... when the
/// automaton's own actions already use those ports.
fn queue_ports(actions: &BTreeSet<String>) -> (Port, Port) {
    let used: BTreeSet<String> =
        actions.iter().filter_map(|a| CommAction::parse(a).ok()?.port().map(str::to_string)).collect();
    let mut candidates = vec![("i".to_string(), "o".to_string()), ("qi".to_string(), "qo".to_string())];
    candidates.extend((1..).take(used.len() + 1).map(|n| (format!("qi{n}"), format!("qo{n}"))));
    candidates.into_iter().find(|(i, o)| !used.contains(i) && !used.contains(o)).unwrap()
}

/// The control of a normalized queue automaton. Main states are `s[d]`
/// (queue head `d`) and `s[eps]` (queue empty); the initial state is the
/// automaton's initial state with `[eps]`, and `s[x]` is final iff `s` is.
///
/// For transition `k` from `s` to `t` (helper names `k.n[...]`):
///
/// * `a[ε/ε]`: `s[eps] -a-> t[eps]`.
/// * `a[*/d]`: `s[e] -a-> k.1[e] -i!d-> t[e]` for each `e`, and
///   `s[eps] -a-> k.1[eps] -i!d-> t[d]`.
/// * `a[d/ε]`: `s[d] -a-> k.1 -o?d-> k.2`, then `k.2 -o?eps-> t[eps]`, or
///   for the next head `e`: `k.2 -o?e-> k.3[e] -i!$-> k.4[e] -i!e-> k.5[e]`,
///   which cycles the rest of the queue with `-o?f-> k.6[e,f] -i!f->` back to
///   `k.5[e]` and leaves with `k.5[e] -o?$-> t[e]`.
pub fn control_of(qa: &QueueAutomaton) -> Result<Control> {
    if !qa.is_normalized() {
        return Err(Error::Precondition("control_of needs a normalized automaton".into()));
    }
    let dollar = Symbol::bookmark();
    if qa.data.contains(&dollar) {
        return Err(Error::ReservedSymbol(dollar.to_string()));
    }
    let (ip, op) = queue_ports(&qa.actions);
    let send = |d: &Symbol| ActionLabel::Visible(format!("{ip}!{d}"));
    let recv = |d: &Symbol| ActionLabel::Visible(format!("{op}?{d}"));
    let recv_empty = ActionLabel::Visible(format!("{op}?eps"));
    let main = |s: &str, h: Option<&Symbol>| match h {
        Some(d) => format!("{s}[{d}]"),
        None => format!("{s}[eps]"),
    };

    let mut edges: BTreeMap<String, Vec<(ActionLabel, String)>> = BTreeMap::new();
    let mut add = |src: String, a: ActionLabel, dst: String| edges.entry(src).or_default().push((a, dst));
    for (k, tr) in qa.transitions.iter().enumerate() {
        let (s, a, t) = (tr.src.as_str(), tr.action.clone(), tr.dst.as_str());
        match (&tr.trigger, tr.enqueue.as_slice()) {
            (Trigger::Empty, []) => add(main(s, None), a, main(t, None)),
            (Trigger::Any, [d]) => {
                for e in &qa.data {
                    let h = format!("{k}.1[{e}]");
                    add(main(s, Some(e)), a.clone(), h.clone());
                    add(h, send(d), main(t, Some(e)));
                }
                let h = format!("{k}.1[eps]");
                add(main(s, None), a, h.clone());
                add(h, send(d), main(t, Some(d)));
            }
            (Trigger::Head(d), []) => {
                let (h1, h2) = (format!("{k}.1"), format!("{k}.2"));
                add(main(s, Some(d)), a, h1.clone());
                add(h1, recv(d), h2.clone());
                add(h2.clone(), recv_empty.clone(), main(t, None));
                for e in &qa.data {
                    let (h3, h4, h5) = (format!("{k}.3[{e}]"), format!("{k}.4[{e}]"), format!("{k}.5[{e}]"));
                    add(h2.clone(), recv(e), h3.clone());
                    add(h3, send(&dollar), h4.clone());
                    add(h4, send(e), h5.clone());
                    add(h5.clone(), recv(&dollar), main(t, Some(e)));
                    for f in &qa.data {
                        let h6 = format!("{k}.6[{e},{f}]");
                        add(h5.clone(), recv(f), h6.clone());
                        add(h6, send(f), h5.clone());
                    }
                }
            }
            _ => unreachable!("normalized"),
        }
    }

    // Keep the part reachable from the initial state.
    let root = main(&qa.initial, None);
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut names = vec![root.clone()];
    index.insert(root, 0);
    let mut out: Vec<Vec<(ActionLabel, usize)>> = Vec::new();
    let mut todo = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(i) = todo.pop_front() {
        debug_assert_eq!(i, expanded);
        expanded += 1;
        let mut es = Vec::new();
        for (a, dst) in edges.get(&names[i]).cloned().unwrap_or_default() {
            let j = match index.get(&dst) {
                Some(&j) => j,
                None => {
                    let j = names.len();
                    index.insert(dst.clone(), j);
                    names.push(dst);
                    todo.push_back(j);
                    j
                }
            };
            es.push((a, j));
        }
        out.push(es);
    }
    let finals = names
        .iter()
        .map(|n| {
            let base = n.strip_suffix(']').and_then(|m| m.rsplit_once('[')).map(|(s, _)| s);
            base.is_some_and(|s| qa.states.contains(s) && qa.finals.contains(s)) && !is_helper(n)
        })
        .collect();
    let n = names.len();
    let mut lts = FiniteLts { states: names, out, root: 0, finals, frontier: vec![false; n] };
    lts.canonicalize_edges();
    Ok(Control { lts, input: ip, output: op, data: qa.data.clone() })
}

fn is_helper(name: &str) -> bool {
    let head = name.split(['[', '.']).next().unwrap_or("");
    name.contains('.') && !head.is_empty() && head.chars().all(|c| c.is_ascii_digit())
}

/// The control in parallel with a FIFO queue over `data ∪ {$}`, queue ports
/// encapsulated and their communications hidden.
#[derive(Debug, Clone)]
pub struct Composite {
    control: Control,
    moves: Vec<Vec<(Move, usize)>>,
    queue: QueueAutomaton,
}

#[derive(Debug, Clone)]
enum Move {
    Own(ActionLabel),
    /// Synchronizes with the queue action with this label.
    Sync(ActionLabel),
}

/// The one-state queue automaton `q` with `in?d [*/d]`, `out!d [d/ε]` and
/// `out!eps [ε/ε]`, always final.
pub fn queue_automaton(data: &BTreeSet<Symbol>, input: &str, output: &str) -> QueueAutomaton {
    let q = "q".to_string();
    let mut actions = BTreeSet::from([format!("{output}!eps")]);
    let mut transitions = vec![crate::automaton::QTransition::new(
        &q,
        ActionLabel::Visible(format!("{output}!eps")),
        Trigger::Empty,
        vec![],
        &q,
    )];
    for d in data {
        actions.insert(format!("{input}?{d}"));
        actions.insert(format!("{output}!{d}"));
        transitions.push(crate::automaton::QTransition::new(
            &q,
            ActionLabel::Visible(format!("{input}?{d}")),
            Trigger::Any,
            vec![d.clone()],
            &q,
        ));
        transitions.push(crate::automaton::QTransition::new(
            &q,
            ActionLabel::Visible(format!("{output}!{d}")),
            Trigger::Head(d.clone()),
            vec![],
            &q,
        ));
    }
    QueueAutomaton {
        states: [q.clone()].into(),
        actions,
        data: data.clone(),
        transitions,
        initial: q.clone(),
        finals: [q].into(),
    }
}

pub fn compose_with_queue(control: &Control, data: &BTreeSet<Symbol>) -> Result<Composite> {
    let mut qdata = data.clone();
    qdata.insert(Symbol::bookmark());
    let (ip, op) = (&control.input, &control.output);
    let mut moves = Vec::new();
    for es in &control.lts.out {
        let mut ms = Vec::new();
        for (a, t) in es {
            let m = match CommAction::from_label(a) {
                Ok(CommAction::Send(c, Payload::Data(d))) if &c == ip && qdata.contains(&d) => {
                    Move::Sync(ActionLabel::Visible(format!("{ip}?{d}")))
                }
                Ok(CommAction::Receive(c, p))
                    if &c == op
                        && (matches!(&p, Payload::EmptyProbe)
                            || matches!(&p, Payload::Data(d) if qdata.contains(d))) =>
                {
                    Move::Sync(ActionLabel::Visible(format!("{op}!{p}")))
                }
                Ok(c) if c.port().is_some_and(|p| p == ip || p == op) => {
                    return Err(Error::Precondition(format!("control action '{a}' does not fit the queue")));
                }
                _ => Move::Own(a.clone()),
            };
            ms.push((m, *t));
        }
        moves.push(ms);
    }
    Ok(Composite { control: control.clone(), moves, queue: queue_automaton(&qdata, ip, op) })
}

pub type CompositeConfig = (usize, QConfiguration);

impl Composite {
    fn steps(&self, c: &CompositeConfig, comm_only: bool) -> Result<Vec<(ActionLabel, CompositeConfig)>> {
        let (s, q) = c;
        let mut out = Vec::new();
        let queue_steps = self.queue.step(q)?;
        for (m, t) in &self.moves[*s] {
            match m {
                Move::Own(a) if !comm_only => out.push((a.clone(), (*t, q.clone()))),
                Move::Own(_) => {}
                Move::Sync(want) => {
                    for (b, q2) in &queue_steps {
                        if b == want {
                            out.push((ActionLabel::Tau, (*t, q2.clone())));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The τ-edges of an exploration of `self` that are communications with
    /// the queue.
    pub fn comm_tau_edges(&self, lts: &FiniteLts, configs: &[CompositeConfig]) -> Result<BTreeSet<(usize, usize)>> {
        let mut edges = BTreeSet::new();
        for (s, es) in lts.out.iter().enumerate() {
            let comm: BTreeSet<String> = self.steps(&configs[s], true)?.iter().map(|(_, c)| self.describe(c)).collect();
            for (a, t) in es {
                if a.is_tau() && comm.contains(&lts.states[*t]) {
                    edges.insert((s, *t));
                }
            }
        }
        Ok(edges)
    }
}

impl ProcessGraph for Composite {
    type Config = CompositeConfig;

    fn root(&self) -> CompositeConfig {
        (self.control.lts.root, self.queue.initial_configuration())
    }

    fn successors(&self, c: &CompositeConfig) -> Result<Vec<(ActionLabel, CompositeConfig)>> {
        self.steps(c, false)
    }

    fn is_final(&self, c: &CompositeConfig) -> bool {
        self.control.lts.finals[c.0] && self.queue.finals.contains(&c.1.state)
    }

    fn describe(&self, c: &CompositeConfig) -> String {
        format!("{} | {}", self.control.lts.states[c.0], word_to_display(&c.1.queue))
    }

    fn memory_len(&self, c: &CompositeConfig) -> usize {
        c.1.queue.len()
    }
}

/// One equation `X<i> = Σ a.X<j> (+ 1)` per state of a frontier-free LTS;
/// the root is `X<root>`.
pub fn spec_of_lts(lts: &FiniteLts) -> Result<(RecursiveSpec, Term)> {
    if lts.has_frontier() {
        return Err(Error::Precondition("cannot write equations for a truncated LTS".into()));
    }
    let mut spec = RecursiveSpec::default();
    for (s, es) in lts.out.iter().enumerate() {
        let mut branches = Vec::new();
        if lts.finals[s] {
            branches.push(accept());
        }
        for (a, t) in es {
            branches.push(prefix(CommAction::from_label(a)?, var(format!("X{t}"))));
        }
        spec.equations.insert(format!("X{s}"), sum(branches));
    }
    Ok((spec, var(format!("X{}", lts.root))))
}

/// `hide({i,o}, encap({i,o}, X || Qio))` with the control's equations and
/// the recursive queue over `data ∪ {$}`. Needs the control to use ports
/// `i` and `o`.
pub fn compose_terms(control: &Control, data: &BTreeSet<Symbol>) -> Result<(RecursiveSpec, Term)> {
    if control.input != "i" || control.output != "o" {
        return Err(Error::Precondition("the recursive queue uses ports i and o".into()));
    }
    let (mut spec, root) = spec_of_lts(&control.lts)?;
    let mut qdata = data.clone();
    qdata.insert(Symbol::bookmark());
    spec.equations.extend(queue_spec(&qdata)?.equations);
    let t = hide(["i", "o"], encap(["i", "o"], merge(root, var(queue_var("i", "o")))));
    Ok((spec, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sos::term_lts;
    use crate::bisim::{branching_bisim, inert_taus};
    use crate::corpus;
    use crate::lts::{explore, explore_with_configs, ExplorationBound};
    use crate::parse::parse_qa;
    use crate::transform::normalize;

    fn label(lts: &FiniteLts, s: usize) -> Vec<String> {
        lts.out[s].iter().map(|(a, t)| format!("{a}->{}", lts.states[*t])).collect()
    }

    #[test]
    fn clause_four() {
        let qa = parse_qa("qa\ndata: d\nactions: a\nstates: s t\ninitial: s\nfinals: t\ntrans: s a eps - t\n").unwrap();
        let c = control_of(&qa).unwrap();
        assert_eq!(c.lts.states, vec!["s[eps]", "t[eps]"]);
        assert_eq!(label(&c.lts, 0), vec!["a->t[eps]"]);
        assert_eq!(c.lts.finals, vec![false, true]);
    }

    #[test]
    fn clause_five_on_empty_queue() {
        let qa = parse_qa("qa\ndata: d\nactions: a\nstates: s t\ninitial: s\nfinals:\ntrans: s a any d t\n").unwrap();
        let c = control_of(&qa).unwrap();
        assert_eq!(label(&c.lts, 0), vec!["a->0.1[eps]"]);
        assert_eq!(label(&c.lts, 1), vec!["i!d->t[d]"]);
    }

    #[test]
    fn fig3_left_uses_fresh_ports() {
        let qa = corpus::load_qa("fig3_left").unwrap();
        let c = control_of(&qa).unwrap();
        assert_eq!((c.input.as_str(), c.output.as_str()), ("qi", "qo"));
        let mains: Vec<&String> = c.lts.states.iter().filter(|s| s.starts_with("s0[")).collect();
        assert_eq!(mains.len(), qa.data.len() + 1);
    }

    #[test]
    fn not_normalized_is_rejected() {
        let qa = corpus::load_qa("fig2").unwrap();
        assert!(matches!(control_of(&qa), Err(Error::Precondition(_))));
    }

    #[test]
    fn terminating_control_is_final_at_the_root() {
        let qa = parse_qa("qa\ndata: d\nactions: a\nstates: s\ninitial: s\nfinals: s\n").unwrap();
        let c = control_of(&qa).unwrap();
        let comp = compose_with_queue(&c, &qa.data).unwrap();
        let lts = explore(&comp, ExplorationBound::depth(3)).unwrap();
        assert!(lts.finals[lts.root]);
        assert_eq!(lts.len(), 1);
    }

    #[test]
    fn unmatched_dequeue_blocks() {
        let mut lts = FiniteLts::singleton("c", false);
        lts.states.push("c2".into());
        lts.out.push(vec![]);
        lts.finals.push(false);
        lts.frontier.push(false);
        lts.out[0].push((ActionLabel::Visible("o?d".into()), 1));
        let c = Control { lts, input: "i".into(), output: "o".into(), data: [Symbol::new("d").unwrap()].into() };
        let comp = compose_with_queue(&c, &c.data).unwrap();
        assert!(comp.successors(&comp.root()).unwrap().is_empty());
    }

    fn check_decomposition(qa: &QueueAutomaton, depth: usize, composite_depth: usize) {
        let c = control_of(qa).unwrap();
        let comp = compose_with_queue(&c, &qa.data).unwrap();
        let (lts, configs) = explore_with_configs(&comp, ExplorationBound::depth(composite_depth)).unwrap();
        let q = explore(qa, ExplorationBound::depth(depth)).unwrap();
        let v = branching_bisim(&q, &lts);
        assert!(v.is_related(), "{}", v.witness().unwrap());
        let inert = inert_taus(&lts);
        for e in comp.comm_tau_edges(&lts, &configs).unwrap() {
            assert!(inert.contains(&e), "{} -> {}", lts.states[e.0], lts.states[e.1]);
        }
    }

    #[test]
    fn fig3_left_decomposes() {
        check_decomposition(&corpus::load_qa("fig3_left").unwrap(), 6, 30);
    }

    #[test]
    fn fig2_decomposes() {
        let qa = normalize(&corpus::load_qa("fig2").unwrap()).unwrap().output;
        check_decomposition(&qa, 8, 40);
    }

    #[test]
    fn term_route_for_an_enqueue_only_control() {
        let qa = parse_qa("qa\ndata: d\nactions: a\nstates: s\ninitial: s\nfinals: s\ntrans: s a any d s\n").unwrap();
        let c = control_of(&qa).unwrap();
        let (spec, t) = compose_terms(&c, &qa.data).unwrap();
        let by_terms = term_lts(&t, &spec, ExplorationBound::depth(8)).unwrap();
        let by_product = explore(&compose_with_queue(&c, &qa.data).unwrap(), ExplorationBound::depth(8)).unwrap();
        assert!(branching_bisim(&by_terms, &by_product).is_related());
    }
}
