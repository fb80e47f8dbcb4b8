use super::{certify, require_fresh_symbols, word, Builder, PassReport};
use crate::automaton::QueueAutomaton;
use crate::error::Result;
use crate::symbol::{Symbol, Trigger};

/// Replaces every `s a[*/δ] t` (transition `k`) by `s a[ε/δ] t` plus, with
/// the bookmark `$` and a helper `h = s__pk__1`,
/// `s a[d/d$] h`, `h τ[d/d] h` for all `d`, and `h τ[$/δ] t`.
///
/// The helper is per transition rather than per state: two `*`-transitions
/// leaving the same state would otherwise share the exit `τ[$/δ]` and could
/// swap their enqueues.
pub fn eliminate_any_triggers(qa: &QueueAutomaton) -> Result<PassReport<QueueAutomaton>> {
    let dollar = Symbol::bookmark();
    require_fresh_symbols(&qa.data, std::slice::from_ref(&dollar))?;
    let mut data = qa.data.clone();
    data.insert(dollar.clone());
    let mut b = Builder::new(qa, data);
    for (k, t) in qa.transitions.iter().enumerate() {
        if t.trigger != Trigger::Any {
            b.add(&t.src, t.action.clone(), t.trigger.clone(), t.enqueue.clone(), &t.dst);
            continue;
        }
        b.add(&t.src, t.action.clone(), Trigger::Empty, t.enqueue.clone(), &t.dst);
        let h = b.helper(&t.src, k, 1)?;
        for d in &qa.data {
            b.add(&t.src, t.action.clone(), Trigger::Head(d.clone()), word(&[d, &dollar]), &h);
        }
        b.rotate(&h, &qa.data);
        b.tau(&h, Trigger::Head(dollar.clone()), t.enqueue.clone(), &t.dst);
    }
    let (output, fresh_states) = b.finish();
    let certificate = certify(&output, "no transition has a * trigger", |t| t.trigger != Trigger::Any)?;
    Ok(PassReport { pass: "star-elim", fresh_symbols: vec![dollar], fresh_states, output, certificate })
}
