//! Reference implementation: the largest (branching) bisimulation computed
//! as a greatest fixpoint over all pairs of states, straight from the
//! definitions. Cubic or worse; meant for small graphs and as a test oracle.

use super::graph::{Combined, TAU};
use super::Mode;
use crate::lts::FiniteLts;

/// The largest bisimulation on the (sealed) disjoint union of `parts`, as a
/// dense relation indexed by union state.
pub(crate) fn largest_bisimulation(g: &Combined, mode: Mode) -> Vec<Vec<bool>> {
    let n = g.len();
    let closure = tau_closures(g);
    let mut rel = vec![vec![true; n]; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if rel[s][t] && !(transfers(g, mode, &closure, &rel, s, t) && transfers(g, mode, &closure, &rel, t, s))
                {
                    rel[s][t] = false;
                    rel[t][s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

fn tau_closures(g: &Combined) -> Vec<Vec<usize>> {
    (0..g.len())
        .map(|s| {
            let mut seen = vec![false; g.len()];
            let mut stack = vec![s];
            seen[s] = true;
            let mut out = Vec::new();
            while let Some(u) = stack.pop() {
                out.push(u);
                for &(a, v) in &g.out[u] {
                    if a == TAU && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            out.sort();
            out
        })
        .collect()
}

/// Every move of `s` is answered by `t` in `rel`, and finality transfers.
fn transfers(g: &Combined, mode: Mode, closure: &[Vec<usize>], rel: &[Vec<bool>], s: usize, t: usize) -> bool {
    match mode {
        Mode::Strong => {
            if g.finals[s] && !g.finals[t] {
                return false;
            }
            g.out[s].iter().all(|&(a, s2)| g.out[t].iter().any(|&(b, t2)| a == b && rel[s2][t2]))
        }
        Mode::Branching => {
            // s↓ implies t ⇒ t′ with t′↓.
            if g.finals[s] && !closure[t].iter().any(|&u| g.finals[u]) {
                return false;
            }
            g.out[s].iter().all(|&(a, s2)| {
                // t ⇒ t″ →(a) t′ with s R t″ and s′ R t′, where →(τ) may also stay put.
                closure[t].iter().any(|&t1| {
                    rel[s][t1] && ((a == TAU && rel[s2][t1]) || g.out[t1].iter().any(|&(b, t2)| a == b && rel[s2][t2]))
                })
            })
        }
    }
}

/// Whether the roots of `a` and `b` are related by the naive fixpoint, after
/// the same frontier sealing the partition-refinement engine uses.
pub fn naive_related(a: &FiniteLts, b: &FiniteLts, mode: Mode) -> bool {
    let g = Combined::new(&[a, b]).sealed();
    let rel = largest_bisimulation(&g, mode);
    rel[g.root(0, a)][g.root(1, b)]
}

/// The naive relation on the states of one LTS.
pub fn naive_relation(lts: &FiniteLts, mode: Mode) -> Vec<Vec<bool>> {
    let g = Combined::new(&[lts]).sealed();
    largest_bisimulation(&g, mode)
}
