//! Two queues in one: `(s, δ, ζ)` is encoded as `(s, δ≬ζ)`, so the second
//! queue sits on the head side of the separator `≬`.

use std::collections::BTreeMap;

use super::{certify, require_fresh_symbols, word, Builder, PassReport};
use crate::automaton::{QueueAutomaton, StateName};
use crate::error::Result;
use crate::symbol::{prepend, Symbol, Trigger, Word};
use crate::two_queue::{QTransition2, TwoQueueAutomaton};

fn setup(qa2: &TwoQueueAutomaton) -> Result<(Symbol, Symbol, Builder, StateName)> {
    let (sep, dollar) = (Symbol::separator(), Symbol::bookmark());
    require_fresh_symbols(&qa2.data, &[sep.clone(), dollar.clone()])?;
    let mut data = qa2.data.clone();
    data.insert(sep.clone());
    data.insert(dollar.clone());
    let mut b =
        Builder::from_parts(qa2.states.clone(), qa2.actions.clone(), data, qa2.initial.clone(), qa2.finals.clone());
    let start = b.fresh(format!("{}__init", qa2.initial))?;
    b.tau(&start, Trigger::Empty, vec![sep.clone()], &qa2.initial);
    b.set_initial(start.clone());
    Ok((sep, dollar, b, start))
}

fn finish(b: Builder, pass: &'static str, sep: Symbol, dollar: Symbol) -> Result<PassReport<QueueAutomaton>> {
    let (output, fresh_states) = b.finish();
    let certificate = certify(&output, "valid one-queue automaton", |_| true)?;
    Ok(PassReport { pass, fresh_symbols: vec![sep, dollar], fresh_states, output, certificate })
}

/// The construction exactly as its nine trigger clauses are stated, with
/// helpers `s__pk__1..4`.
///
/// Clauses that test a queue by τ-steps before the visible action commit to
/// that transition early, so the result is only branching bisimilar to the
/// source when no state mixes such a transition with other choices; several
/// failing branches also lose or misplace a symbol. [`merge_two_queues`] is
/// the sound variant.
pub fn merge_two_queues_literal(qa2: &TwoQueueAutomaton) -> Result<PassReport<QueueAutomaton>> {
    let (sep, dollar, mut b, _) = setup(qa2)?;
    let data = qa2.data.clone();
    let sd = |d: &Symbol| Trigger::Head(d.clone());
    for (k, t) in qa2.transitions.iter().enumerate() {
        let QTransition2 { src: s, action: a, enqueues: (delta, zeta), dst, .. } = t;
        let a = a.clone();
        let sep_zeta = prepend(std::slice::from_ref(&sep), zeta);
        let full = [delta.clone(), vec![sep.clone()], zeta.clone()].concat();
        let mut h = Vec::new();
        let n_helpers = match (&t.triggers.0, &t.triggers.1) {
            (Trigger::Any, Trigger::Any) | (Trigger::Any, Trigger::Head(_)) => 2,
            (Trigger::Any, Trigger::Empty) => 1,
            (Trigger::Head(_), Trigger::Any) | (Trigger::Head(_), Trigger::Head(_)) => 4,
            _ => 3,
        };
        for n in 1..=n_helpers {
            h.push(b.helper(s, k, n)?);
        }
        match (&t.triggers.0, &t.triggers.1) {
            (Trigger::Any, Trigger::Any) | (Trigger::Any, Trigger::Head(_)) => {
                let first = match &t.triggers.1 {
                    Trigger::Head(d) => sd(d),
                    _ => Trigger::Any,
                };
                b.add(s, a, first, vec![dollar.clone()], &h[0]);
                b.tau(&h[0], sd(&sep), sep_zeta, &h[1]);
                b.tau(&h[1], sd(&dollar), delta.clone(), dst);
                b.rotate(&h[0], &data);
                b.rotate(&h[1], &data);
            }
            (Trigger::Any, Trigger::Empty) => {
                b.add(s, a, sd(&sep), [sep_zeta, vec![dollar.clone()]].concat(), &h[0]);
                b.tau(&h[0], sd(&dollar), delta.clone(), dst);
                b.rotate(&h[0], &data);
            }
            (Trigger::Empty, Trigger::Empty) => {
                b.tau(s, sd(&sep), word(&[&sep, &dollar]), &h[0]);
                b.tau(&h[0], sd(&dollar), vec![], &h[1]);
                b.add(&h[1], a, sd(&sep), full, dst);
                for d in &data {
                    b.tau(&h[0], sd(d), vec![d.clone()], &h[2]);
                }
                b.rotate(&h[2], &data);
                b.tau(&h[2], sd(&dollar), vec![], s);
            }
            (Trigger::Empty, second) => {
                let first = match second {
                    Trigger::Head(d) => sd(d),
                    _ => Trigger::Any,
                };
                b.tau(s, first, vec![dollar.clone()], &h[0]);
                b.tau(&h[0], sd(&sep), vec![], &h[1]);
                b.add(&h[1], a, sd(&dollar), full, dst);
                b.rotate(&h[0], &data);
                b.tau(&h[2], sd(&dollar), vec![], s);
                for f in &data {
                    b.tau(&h[1], sd(f), word(&[f, &sep]), &h[2]);
                }
                b.rotate(&h[2], &data);
            }
            (Trigger::Head(d), Trigger::Empty) => {
                b.tau(s, sd(&sep), vec![dollar.clone()], &h[0]);
                b.add(&h[0], a, sd(d), sep_zeta, &h[1]);
                b.tau(&h[1], sd(&dollar), delta.clone(), dst);
                b.rotate(&h[1], &data);
                b.tau(&h[0], sd(&dollar), vec![], s);
                b.tau(&h[2], sd(&dollar), vec![], s);
                for e in data.iter().filter(|e| *e != d) {
                    b.tau(&h[0], sd(e), word(&[e, &sep]), &h[2]);
                }
                b.rotate(&h[2], &data);
            }
            (Trigger::Head(d), second) => {
                let first = match second {
                    Trigger::Head(e) => sd(e),
                    _ => Trigger::Any,
                };
                b.tau(s, first, vec![dollar.clone()], &h[0]);
                b.tau(&h[0], sd(&sep), vec![], &h[1]);
                b.add(&h[1], a, sd(d), sep_zeta, &h[2]);
                b.tau(&h[2], sd(&dollar), delta.clone(), dst);
                b.rotate(&h[0], &data);
                b.rotate(&h[2], &data);
                // The (d,*) clause exits from s¹ₖ, the (d,e) clause from s²ₖ.
                let exit = if matches!(second, Trigger::Any) { &h[0] } else { &h[1] };
                b.tau(exit, sd(&dollar), vec![], s);
                b.tau(&h[3], sd(&dollar), vec![], s);
                for g in data.iter().filter(|g| *g != d) {
                    b.tau(&h[1], sd(g), word(&[g, &sep]), &h[3]);
                }
                b.rotate(&h[3], &data);
            }
        }
    }
    finish(b, "merge-queues-literal", sep, dollar)
}

fn enabled(t: &Trigger, head: Option<&Symbol>) -> bool {
    match t {
        Trigger::Any => true,
        Trigger::Empty => head.is_none(),
        Trigger::Head(d) => head == Some(d),
    }
}

fn tag(head: Option<&Symbol>) -> String {
    head.map_or_else(|| "-".to_string(), |d| d.to_string())
}

/// Scan first, act second. From `(s, δ≬ζ)` deterministic τ-steps read the
/// heads of both queues, restore the queue and arrive in `s__h_<x>_<y>`
/// (`-` for an empty queue), which offers every transition of `s` enabled
/// by those heads. The visible step comes first and deterministic τ-steps
/// then perform the dequeues and enqueues. All added τ-steps are the only
/// step enabled in their source, hence inert.
pub fn merge_two_queues(qa2: &TwoQueueAutomaton) -> Result<PassReport<QueueAutomaton>> {
    let (sep, dollar, mut b, _) = setup(qa2)?;
    let data = qa2.data.clone();
    let heads: Vec<Option<&Symbol>> = std::iter::once(None).chain(data.iter().map(Some)).collect();
    let sd = |d: &Symbol| Trigger::Head(d.clone());

    for s in &qa2.states {
        let is_final = qa2.finals.contains(s);
        let mut at = BTreeMap::new();
        for &x in &heads {
            for &y in &heads {
                let name = b.fresh(format!("{s}__h_{}_{}", tag(x), tag(y)))?;
                if is_final {
                    b.mark_final(&name);
                }
                at.insert((x, y), name);
            }
        }
        // Rotate the first queue round to the bookmark, remembering its head.
        let scan_first = |b: &mut Builder, from: &str, y: Option<&Symbol>| -> Result<()> {
            for d in &data {
                let w = b.fresh(format!("{s}__w_{}_{}", d, tag(y)))?;
                b.tau(from, sd(d), vec![d.clone()], &w);
                b.rotate(&w, &data);
                b.tau(&w, sd(&dollar), vec![], &at[&(Some(d), y)]);
            }
            b.tau(from, sd(&dollar), vec![], &at[&(None, y)]);
            Ok(())
        };
        // Second queue empty: ≬ is the head.
        let v = b.fresh(format!("{s}__v"))?;
        b.tau(s, sd(&sep), word(&[&sep, &dollar]), &v);
        scan_first(&mut b, &v, None)?;
        // Second queue has head e: bookmark behind it, skip to ≬.
        for e in &data {
            let ve = b.fresh(format!("{s}__v_{e}"))?;
            let xe = b.fresh(format!("{s}__x_{e}"))?;
            b.tau(s, sd(e), word(&[e, &dollar]), &ve);
            b.rotate(&ve, &data);
            b.tau(&ve, sd(&sep), vec![sep.clone()], &xe);
            scan_first(&mut b, &xe, Some(e))?;
        }

        for (k, t) in qa2.transitions.iter().enumerate().filter(|(_, t)| &t.src == s) {
            let (t1, t2) = &t.triggers;
            let (x_enq, y_enq): (&Word, &Word) = (&t.enqueues.0, &t.enqueues.1);
            let u1 = b.helper(s, k, 1)?;
            let u2 = b.helper(s, k, 2)?;
            let u3 = match t1 {
                Trigger::Head(_) => Some(b.helper(s, k, 3)?),
                _ => None,
            };
            for &x in &heads {
                for &y in &heads {
                    if !(enabled(t1, x) && enabled(t2, y)) {
                        continue;
                    }
                    let first = match t2 {
                        Trigger::Head(e) => sd(e),
                        _ => Trigger::Any,
                    };
                    b.add(&at[&(x, y)], t.action.clone(), first, vec![dollar.clone()], &u1);
                }
            }
            b.rotate(&u1, &data);
            b.tau(&u1, sd(&sep), prepend(std::slice::from_ref(&sep), y_enq), &u2);
            let last = match (t1, &u3) {
                (Trigger::Head(d), Some(u3)) => {
                    b.tau(&u2, sd(d), vec![], u3);
                    u3.clone()
                }
                _ => u2.clone(),
            };
            b.rotate(&last, &data);
            b.tau(&last, sd(&dollar), x_enq.clone(), &t.dst);
        }
    }
    finish(b, "merge-queues", sep, dollar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use crate::automaton::QConfiguration;
    use crate::bisim::branching_bisim;
    use crate::corpus;
    use crate::lts::{explore, ExplorationBound};
    use crate::symbol::parse_word;
    use crate::symbol::ActionLabel;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn one(t: QTransition2) -> TwoQueueAutomaton {
        TwoQueueAutomaton {
            states: ["s", "t"].iter().map(|s| s.to_string()).collect(),
            actions: ["a".to_string()].into_iter().collect(),
            data: [Symbol::new("d").unwrap()].into_iter().collect(),
            transitions: vec![t],
            initial: "s".into(),
            finals: BTreeSet::new(),
        }
    }

    fn empty_empty() -> TwoQueueAutomaton {
        one(QTransition2 {
            src: "s".into(),
            action: ActionLabel::visible("a").unwrap(),
            triggers: (Trigger::Empty, Trigger::Empty),
            enqueues: (w("d"), vec![]),
            dst: "t".into(),
        })
    }

    /// Follows the unique enabled step `n` times.
    fn run(qa: &QueueAutomaton, mut cfg: QConfiguration, n: usize) -> Vec<(ActionLabel, QConfiguration)> {
        let mut trace = Vec::new();
        for _ in 0..n {
            let succ = qa.step(&cfg).unwrap();
            assert_eq!(succ.len(), 1, "at {cfg}: {succ:?}");
            cfg = succ[0].1.clone();
            trace.push(succ[0].clone());
        }
        trace
    }

    #[test]
    fn literal_empty_empty_succeeds_on_empty_queues() {
        let m = merge_two_queues_literal(&empty_empty()).unwrap().output;
        let trace = run(&m, QConfiguration::new("s", w("≬")), 3);
        assert_eq!(trace[2].0, ActionLabel::visible("a").unwrap());
        assert_eq!(trace[2].1, QConfiguration::new("t", w("d.≬")));
    }

    #[test]
    fn literal_empty_empty_fails_back_to_s_with_queue_restored() {
        let m = merge_two_queues_literal(&empty_empty()).unwrap().output;
        let trace = run(&m, QConfiguration::new("s", w("d.≬")), 3);
        assert!(trace.iter().all(|(a, _)| a.is_tau()));
        assert_eq!(trace[2].1, QConfiguration::new("s", w("d.≬")));
    }

    #[test]
    fn no_transitions_gives_only_the_initial_step() {
        let mut q = empty_empty();
        q.transitions.clear();
        let lit = merge_two_queues_literal(&q).unwrap().output;
        assert_eq!(lit.transitions.len(), 1);
        assert_eq!(lit.transitions[0].enqueue, w("≬"));
    }

    #[test]
    fn scan_first_matches_the_shuttle() {
        let q = corpus::load_qa2("shuttle").unwrap();
        let m = merge_two_queues(&q).unwrap().output;
        let b = ExplorationBound::depth(8);
        let v = branching_bisim(&explore(&q, b).unwrap(), &explore(&m, ExplorationBound::depth(24)).unwrap());
        assert!(v.is_related(), "{}", v.witness().unwrap());
    }

    #[test]
    fn literal_commits_too_early_on_the_shuttle() {
        let q = corpus::load_qa2("shuttle").unwrap();
        let m = merge_two_queues_literal(&q).unwrap().output;
        let v = branching_bisim(
            &explore(&q, ExplorationBound::depth(8)).unwrap(),
            &explore(&m, ExplorationBound::depth(24)).unwrap(),
        );
        assert!(!v.is_related());
        assert!(!v.witness_touches_frontier());
    }

    #[test]
    fn every_trigger_pair_is_simulated() {
        let d = Symbol::new("d").unwrap();
        let triggers = [Trigger::Empty, Trigger::Any, Trigger::Head(d.clone())];
        for t1 in &triggers {
            for t2 in &triggers {
                let mut q = one(QTransition2 {
                    src: "s".into(),
                    action: ActionLabel::visible("a").unwrap(),
                    triggers: (t1.clone(), t2.clone()),
                    enqueues: (w("d"), w("d")),
                    dst: "s".into(),
                });
                // Fill both queues so every trigger can fire at some point.
                q.transitions.push(QTransition2 {
                    src: "s".into(),
                    action: ActionLabel::visible("b").unwrap(),
                    triggers: (Trigger::Any, Trigger::Any),
                    enqueues: (w("d"), w("d")),
                    dst: "s".into(),
                });
                q.actions.insert("b".into());
                let m = merge_two_queues(&q).unwrap().output;
                let v = branching_bisim(
                    &explore(&q, ExplorationBound::depth(5)).unwrap(),
                    &explore(&m, ExplorationBound::depth(30)).unwrap(),
                );
                assert!(v.is_related(), "{t1:?},{t2:?}: {}", v.witness().unwrap());
            }
        }
    }
}
