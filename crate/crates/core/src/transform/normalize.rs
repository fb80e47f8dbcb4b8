use super::{certify, require_fresh_symbols, Builder, PassReport};
use crate::automaton::QueueAutomaton;
use crate::error::Result;
use crate::symbol::{ActionLabel, Symbol, Trigger};

/// Rewrites every transition into singleton enqueues `a[*/d]` and separate
/// dequeues `a[ε/ε]`, `a[d/ε]`. For transition `k` from `s`:
///
/// 1. `a[*/ε]`: `s a[*/$] h`, `h τ[$/ε] t`, and for every `d` the recycle
///    `h τ[d/ε] h_d τ[*/d] h` (helpers `s__pk__1`, `s__pk__1_d`).
/// 2. `a[*/d1..dn]`, `n > 1`: `a[*/dn]` then `τ[*/dn-1] .. τ[*/d1]`.
/// 3. `a[ε/d1..dn]`: `a[ε/ε]` then `τ[*/dn] .. τ[*/d1]`.
/// 4. `a[d/d1..dn]`: `a[d/ε]` then `τ[*/dn] .. τ[*/d1]`.
///
/// `$` joins the data alphabet only if clause 1 is used.
pub fn normalize(qa: &QueueAutomaton) -> Result<PassReport<QueueAutomaton>> {
    let dollar = Symbol::bookmark();
    require_fresh_symbols(&qa.data, std::slice::from_ref(&dollar))?;
    let needs_dollar = qa.transitions.iter().any(|t| t.trigger == Trigger::Any && t.enqueue.is_empty());
    let mut data = qa.data.clone();
    if needs_dollar {
        data.insert(dollar.clone());
    }
    let mut b = Builder::new(qa, data);
    for (k, t) in qa.transitions.iter().enumerate() {
        let n = t.enqueue.len();
        match (&t.trigger, n) {
            (Trigger::Any, 1) | (Trigger::Empty, 0) | (Trigger::Head(_), 0) => {
                b.add(&t.src, t.action.clone(), t.trigger.clone(), t.enqueue.clone(), &t.dst);
            }
            (Trigger::Any, 0) => {
                let h = b.helper(&t.src, k, 1)?;
                b.add(&t.src, t.action.clone(), Trigger::Any, vec![dollar.clone()], &h);
                b.tau(&h, Trigger::Head(dollar.clone()), vec![], &t.dst);
                for d in &qa.data {
                    let hd = b.helper(&t.src, k, format!("1_{d}"))?;
                    b.tau(&h, Trigger::Head(d.clone()), vec![], &hd);
                    b.tau(&hd, Trigger::Any, vec![d.clone()], &h);
                }
            }
            _ => {
                // Clauses 2-4: a first step, then a chain enqueueing the
                // remaining symbols from the last to the first.
                let (first, rest): (_, &[Symbol]) = match &t.trigger {
                    Trigger::Any => (Trigger::Any, &t.enqueue[..n - 1]),
                    other => (other.clone(), &t.enqueue[..]),
                };
                let first_enqueue = if t.trigger == Trigger::Any { vec![t.enqueue[n - 1].clone()] } else { vec![] };
                let mut chain = Vec::with_capacity(rest.len());
                for i in 1..=rest.len() {
                    chain.push(b.helper(&t.src, k, i)?);
                }
                b.add(&t.src, t.action.clone(), first, first_enqueue, &chain[0]);
                for (i, d) in rest.iter().rev().enumerate() {
                    let dst = chain.get(i + 1).map_or(t.dst.as_str(), String::as_str);
                    b.add(&chain[i], ActionLabel::Tau, Trigger::Any, vec![d.clone()], dst);
                }
            }
        }
    }
    let (output, fresh_states) = b.finish();
    let certificate = certify(&output, "only a[*/d], a[ε/ε] and a[d/ε] transitions", |t| {
        matches!((&t.trigger, t.enqueue.len()), (Trigger::Any, 1) | (Trigger::Empty, 0) | (Trigger::Head(_), 0))
    })?;
    let fresh_symbols = if needs_dollar { vec![dollar] } else { vec![] };
    Ok(PassReport { pass: "normalize", fresh_symbols, fresh_states, output, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::branching_bisim;
    use crate::corpus;
    use crate::lts::{explore, ExplorationBound};
    use crate::symbol::parse_word;

    #[test]
    fn fig2_shape_and_process() {
        let qa = corpus::load_qa("fig2").unwrap();
        let r = normalize(&qa).unwrap();
        assert!(r.output.is_normalized());
        assert!(r.fresh_symbols.is_empty());
        let b = ExplorationBound::depth(10);
        assert!(branching_bisim(&explore(&qa, b).unwrap(), &explore(&r.output, b).unwrap()).is_related());
    }

    #[test]
    fn already_normal_is_unchanged() {
        let qa = corpus::load_qa("fig3_left").unwrap();
        let r = normalize(&qa).unwrap();
        assert_eq!(r.output, qa);
        assert!(r.fresh_states.is_empty());
    }

    #[test]
    fn enqueue_chain_puts_the_last_symbol_nearest_the_head() {
        let mut qa = corpus::load_qa("fig3_left").unwrap();
        qa.data.insert(Symbol::new("e").unwrap());
        qa.transitions = vec![crate::automaton::QTransition::new(
            "s0",
            ActionLabel::visible("i?d").unwrap(),
            Trigger::Empty,
            parse_word("d.e").unwrap(),
            "s0",
        )];
        let out = normalize(&qa).unwrap().output;
        let mut cfg = out.initial_configuration();
        for _ in 0..3 {
            let succ = out.step(&cfg).unwrap();
            assert_eq!(succ.len(), 1);
            cfg = succ[0].1.clone();
        }
        assert_eq!(cfg.state, "s0");
        assert_eq!(cfg.queue, parse_word("d.e").unwrap());
    }

    #[test]
    fn any_with_empty_enqueue_uses_the_recycle_loop() {
        let qa = crate::parse::parse_qa(
            "qa\ndata: d\nactions: a b\nstates: s t\ninitial: s\nfinals: t\n\
             trans: s b any d s\ntrans: s a any - t\n",
        )
        .unwrap();
        let r = normalize(&qa).unwrap();
        assert_eq!(r.fresh_symbols, vec![Symbol::bookmark()]);
        assert!(r.output.is_normalized());
        let b = ExplorationBound::depth(12);
        assert!(branching_bisim(&explore(&qa, b).unwrap(), &explore(&r.output, b).unwrap()).is_related());
    }
}
