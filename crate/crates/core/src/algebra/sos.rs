//! Structural operational semantics of process terms.

use std::collections::BTreeSet;

use super::term::{encap, hide, merge, CommAction, ProcessTerm, RecursiveSpec, Term};
use crate::error::{Error, Result};
use crate::lts::{explore, ExplorationBound, FiniteLts, ProcessGraph};
use crate::symbol::ActionLabel;

/// All steps of `t`, deduplicated and sorted by action and printed target.
pub fn sos_step(t: &Term, spec: &RecursiveSpec) -> Result<Vec<(CommAction, Term)>> {
    let mut steps = Vec::new();
    collect(t, spec, &mut Vec::new(), &mut steps)?;
    let mut keyed: Vec<(CommAction, String, Term)> = steps.into_iter().map(|(a, p)| (a, p.to_string(), p)).collect();
    keyed.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    keyed.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
    Ok(keyed.into_iter().map(|(a, _, p)| (a, p)).collect())
}

// `unfolding` holds the variables being unfolded without an action in
// between; meeting one again means unguarded recursion.
fn collect(
    t: &Term,
    spec: &RecursiveSpec,
    unfolding: &mut Vec<String>,
    out: &mut Vec<(CommAction, Term)>,
) -> Result<()> {
    match &**t {
        ProcessTerm::Deadlock | ProcessTerm::Accept => {}
        ProcessTerm::Prefix(a, p) => out.push((a.clone(), p.clone())),
        ProcessTerm::Choice(p, q) => {
            collect(p, spec, unfolding, out)?;
            collect(q, spec, unfolding, out)?;
        }
        ProcessTerm::Merge(p, q) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            collect(p, spec, unfolding, &mut left)?;
            collect(q, spec, unfolding, &mut right)?;
            for (a, p2) in &left {
                out.push((a.clone(), merge(p2.clone(), q.clone())));
            }
            for (b, q2) in &right {
                out.push((b.clone(), merge(p.clone(), q2.clone())));
            }
            for (a, p2) in &left {
                for (b, q2) in &right {
                    if let Some(c) = communicate(a, b) {
                        out.push((c, merge(p2.clone(), q2.clone())));
                    }
                }
            }
        }
        ProcessTerm::Encap(ports, p) => {
            let mut inner = Vec::new();
            collect(p, spec, unfolding, &mut inner)?;
            for (a, p2) in inner {
                let blocked = matches!(&a, CommAction::Send(c, _) | CommAction::Receive(c, _) if ports.contains(c));
                if !blocked {
                    out.push((a, encap(ports.iter().map(String::as_str), p2)));
                }
            }
        }
        ProcessTerm::Hide(ports, p) => {
            let mut inner = Vec::new();
            collect(p, spec, unfolding, &mut inner)?;
            for (a, p2) in inner {
                let a = match a {
                    CommAction::Comm(c, _) if ports.contains(&c) => CommAction::Tau,
                    other => other,
                };
                out.push((a, hide(ports.iter().map(String::as_str), p2)));
            }
        }
        ProcessTerm::Var(x) => {
            if unfolding.contains(x) {
                return Err(Error::UnguardedRecursion(x.clone()));
            }
            unfolding.push(x.clone());
            collect(spec.get(x)?, spec, unfolding, out)?;
            unfolding.pop();
        }
    }
    Ok(())
}

/// `c!d` against `c?d` in either order.
fn communicate(a: &CommAction, b: &CommAction) -> Option<CommAction> {
    match (a, b) {
        (CommAction::Send(c, d), CommAction::Receive(c2, d2))
        | (CommAction::Receive(c, d), CommAction::Send(c2, d2))
            if c == c2 && d == d2 =>
        {
            Some(CommAction::Comm(c.clone(), d.clone()))
        }
        _ => None,
    }
}

pub fn terminates(t: &Term, spec: &RecursiveSpec) -> Result<bool> {
    term_ok(t, spec, &mut Vec::new())
}

fn term_ok(t: &Term, spec: &RecursiveSpec, unfolding: &mut Vec<String>) -> Result<bool> {
    Ok(match &**t {
        ProcessTerm::Deadlock | ProcessTerm::Prefix(..) => false,
        ProcessTerm::Accept => true,
        ProcessTerm::Choice(p, q) => term_ok(p, spec, unfolding)? || term_ok(q, spec, unfolding)?,
        ProcessTerm::Merge(p, q) => term_ok(p, spec, unfolding)? && term_ok(q, spec, unfolding)?,
        ProcessTerm::Encap(_, p) | ProcessTerm::Hide(_, p) => term_ok(p, spec, unfolding)?,
        ProcessTerm::Var(x) => {
            if unfolding.contains(x) {
                return Err(Error::UnguardedRecursion(x.clone()));
            }
            unfolding.push(x.clone());
            let r = term_ok(spec.get(x)?, spec, unfolding)?;
            unfolding.pop();
            r
        }
    })
}

/// The process graph of a term; states are identified by printed form.
#[derive(Debug, Clone)]
pub struct TermGraph {
    pub spec: RecursiveSpec,
    pub root: Term,
}

impl TermGraph {
    pub fn new(spec: RecursiveSpec, root: Term) -> Result<Self> {
        spec.check_closed([&root])?;
        Ok(TermGraph { spec, root })
    }
}

impl ProcessGraph for TermGraph {
    type Config = Term;

    fn root(&self) -> Term {
        self.root.clone()
    }

    fn successors(&self, c: &Term) -> Result<Vec<(ActionLabel, Term)>> {
        Ok(sos_step(c, &self.spec)?.into_iter().map(|(a, p)| (a.to_label(), p)).collect())
    }

    fn is_final(&self, c: &Term) -> bool {
        // Closedness was checked up front and guardedness by `successors`.
        terminates(c, &self.spec).unwrap_or(false)
    }

    fn describe(&self, c: &Term) -> String {
        c.to_string()
    }
}

pub fn term_lts(t: &Term, spec: &RecursiveSpec, bound: ExplorationBound) -> Result<FiniteLts> {
    let g = TermGraph::new(spec.clone(), t.clone())?;
    terminates(t, spec)?;
    explore(&g, bound)
}

/// Actions occurring syntactically in the spec and `t`.
pub fn alphabet(t: &Term, spec: &RecursiveSpec) -> BTreeSet<CommAction> {
    let mut acts = BTreeSet::new();
    let mut todo: Vec<&Term> = spec.equations.values().chain([t]).collect();
    while let Some(t) = todo.pop() {
        match &**t {
            ProcessTerm::Prefix(a, p) => {
                acts.insert(a.clone());
                todo.push(p);
            }
            ProcessTerm::Encap(_, p) | ProcessTerm::Hide(_, p) => todo.push(p),
            ProcessTerm::Choice(p, q) | ProcessTerm::Merge(p, q) => {
                todo.push(p);
                todo.push(q);
            }
            _ => {}
        }
    }
    acts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::term::{accept, parse_bcp, parse_term};

    fn steps(text: &str) -> Vec<(String, String)> {
        sos_step(&parse_term(text).unwrap(), &RecursiveSpec::default())
            .unwrap()
            .into_iter()
            .map(|(a, p)| (a.to_string(), p.to_string()))
            .collect()
    }

    #[test]
    fn prefix_and_accept() {
        assert_eq!(steps("a.1"), vec![("a".into(), "1".into())]);
        let none = RecursiveSpec::default();
        assert!(!terminates(&parse_term("a.1").unwrap(), &none).unwrap());
        assert!(terminates(&accept(), &none).unwrap());
    }

    #[test]
    fn encapsulated_communication() {
        assert_eq!(steps("encap({c}, c!d.1 || c?d.1)"), vec![("c(d)".into(), "encap({c}, 1 || 1)".into())]);
    }

    #[test]
    fn hidden_communication_terminates() {
        let s = steps("hide({c}, encap({c}, c!d.1 || c?d.1))");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].0, "tau");
        assert!(terminates(&parse_term(&s[0].1).unwrap(), &RecursiveSpec::default()).unwrap());
    }

    #[test]
    fn merge_interleaves_and_communicates() {
        let s = steps("c!d.1 || c?d.1");
        let acts: Vec<&str> = s.iter().map(|(a, _)| a.as_str()).collect();
        assert_eq!(acts, vec!["c!d", "c?d", "c(d)"]);
    }

    #[test]
    fn mismatched_payloads_do_not_communicate() {
        assert_eq!(steps("encap({c}, c!d.1 || c?e.1)"), vec![]);
    }

    #[test]
    fn small_term_lts() {
        let lts =
            term_lts(&parse_term("a.1 + b.1").unwrap(), &RecursiveSpec::default(), ExplorationBound::depth(5)).unwrap();
        assert_eq!((lts.len(), lts.edge_count()), (2, 2));
        let lts =
            term_lts(&parse_term("a.1 + b.0").unwrap(), &RecursiveSpec::default(), ExplorationBound::depth(5)).unwrap();
        assert_eq!((lts.len(), lts.edge_count()), (3, 2));
        let lts = term_lts(&parse_term("0").unwrap(), &RecursiveSpec::default(), ExplorationBound::depth(5)).unwrap();
        assert_eq!((lts.len(), lts.edge_count(), lts.finals[0]), (1, 0, false));
    }

    #[test]
    fn recursion_unfolds() {
        let f = parse_bcp("X = a.X + 1\n").unwrap();
        let lts = term_lts(&f.root, &f.spec, ExplorationBound::depth(5)).unwrap();
        assert_eq!((lts.len(), lts.edge_count()), (1, 1));
        assert!(lts.finals[0]);
    }

    #[test]
    fn unguarded_recursion_is_reported() {
        let f = parse_bcp("X = Y + a.1\nY = X\n").unwrap();
        assert!(matches!(sos_step(&f.root, &f.spec), Err(Error::UnguardedRecursion(_))));
        assert!(matches!(terminates(&f.root, &f.spec), Err(Error::UnguardedRecursion(_))));
    }

    #[test]
    fn unbound_variable_is_reported() {
        let t = parse_term("a.Z").unwrap();
        assert!(matches!(
            term_lts(&t, &RecursiveSpec::default(), ExplorationBound::depth(2)),
            Err(Error::UnboundVariable(_))
        ));
    }
}
