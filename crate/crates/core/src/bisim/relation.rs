//! Greatest-fixpoint bisimulation check over pairs discovered on demand, in
//! which frontier states are wildcards.
//!
//! A pair with a frontier member is always kept, and a challenge is also
//! answered when the responder can τ-step into a frontier state, because the
//! truncation says nothing about what happens beyond it. Every bisimulation
//! on the full graphs, restricted to the explored states, survives, so a
//! removed pair is a genuine inequivalence.

use std::collections::{HashMap, VecDeque};

use super::graph::{Combined, TAU};
use super::{Mode, Side, Witness, WitnessStep};

type Pair = (usize, usize);

fn key(s: usize, t: usize) -> Pair {
    if s <= t {
        (s, t)
    } else {
        (t, s)
    }
}

#[derive(Debug, Clone)]
enum Cause {
    /// `challenger --label--> target` had no answer from the other state.
    Move { challenger: usize, label: u32, target: usize },
    /// `challenger` is final and the other state cannot silently terminate.
    Final { challenger: usize },
}

pub(crate) struct Engine<'g> {
    g: &'g Combined,
    mode: Mode,
    closure: Vec<Option<Vec<usize>>>,
    ids: HashMap<Pair, usize>,
    pairs: Vec<Pair>,
    rdeps: Vec<Vec<usize>>,
    /// Removal round, or `None` while the pair is still related.
    removed: Vec<Option<(usize, Cause)>>,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g Combined, mode: Mode) -> Self {
        Engine {
            g,
            mode,
            closure: vec![None; g.len()],
            ids: HashMap::new(),
            pairs: Vec::new(),
            rdeps: Vec::new(),
            removed: Vec::new(),
        }
    }

    fn trivial(&self, (s, t): Pair) -> bool {
        s == t || self.g.frontier[s] || self.g.frontier[t]
    }

    /// τ-reachable states of `s`, itself included (just `s` in strong mode).
    fn closure(&mut self, s: usize) -> &[usize] {
        if self.closure[s].is_none() {
            let c = match self.mode {
                Mode::Strong => vec![s],
                Mode::Branching => {
                    let mut seen = vec![s];
                    let mut i = 0;
                    while i < seen.len() {
                        for &(a, v) in &self.g.out[seen[i]] {
                            if a == TAU && !seen.contains(&v) {
                                seen.push(v);
                            }
                        }
                        i += 1;
                    }
                    seen
                }
            };
            self.closure[s] = Some(c);
        }
        self.closure[s].as_deref().unwrap_or_default()
    }

    fn reaches_frontier(&mut self, s: usize) -> bool {
        let g = self.g;
        self.closure(s).iter().any(|&u| g.frontier[u])
    }

    fn related(&self, p: Pair) -> bool {
        let p = key(p.0, p.1);
        self.trivial(p) || self.ids.get(&p).is_some_and(|&i| self.removed[i].is_none())
    }

    /// Pairs the condition of `(s, t)` consults when `s` challenges.
    fn references(&mut self, s: usize, t: usize, acc: &mut Vec<Pair>) {
        if self.reaches_frontier(t) {
            return;
        }
        let ct = self.closure(t).to_vec();
        for &(a, s2) in &self.g.out[s] {
            if a == TAU && self.mode == Mode::Branching {
                acc.push(key(s2, t));
            }
            for &t1 in &ct {
                if t1 != t {
                    acc.push(key(s, t1));
                }
                if a == TAU && self.mode == Mode::Branching {
                    acc.push(key(s2, t1));
                }
                for &(b, t2) in &self.g.out[t1] {
                    if a == b {
                        acc.push(key(s2, t2));
                    }
                }
            }
        }
    }

    /// Checks the challenge direction `s` against `t`, returning the first
    /// violated clause.
    fn violation(&mut self, s: usize, t: usize) -> Option<Cause> {
        if self.reaches_frontier(t) {
            return None;
        }
        let g = self.g;
        let ct = self.closure(t).to_vec();
        if g.finals[s] && !ct.iter().any(|&u| g.finals[u]) {
            return Some(Cause::Final { challenger: s });
        }
        for &(a, s2) in &g.out[s] {
            let answered = match self.mode {
                Mode::Strong => g.out[t].iter().any(|&(b, t2)| a == b && self.related((s2, t2))),
                Mode::Branching => {
                    (a == TAU && self.related((s2, t)))
                        || ct.iter().any(|&t1| {
                            self.related((s, t1))
                                && ((a == TAU && self.related((s2, t1)))
                                    || g.out[t1].iter().any(|&(b, t2)| a == b && self.related((s2, t2))))
                        })
                }
            };
            if !answered {
                return Some(Cause::Move { challenger: s, label: a, target: s2 });
            }
        }
        None
    }

    fn intern(&mut self, p: Pair, frontier: &mut VecDeque<usize>) -> usize {
        if let Some(&i) = self.ids.get(&p) {
            return i;
        }
        let i = self.pairs.len();
        self.ids.insert(p, i);
        self.pairs.push(p);
        self.rdeps.push(Vec::new());
        self.removed.push(None);
        frontier.push_back(i);
        i
    }

    /// Discovers every pair reachable from `seeds` and computes the largest
    /// relation among them.
    pub fn solve(&mut self, seeds: &[Pair]) {
        let mut discover = VecDeque::new();
        for &(s, t) in seeds {
            let p = key(s, t);
            if !self.trivial(p) {
                self.intern(p, &mut discover);
            }
        }
        let mut acc = Vec::new();
        while let Some(i) = discover.pop_front() {
            let (s, t) = self.pairs[i];
            acc.clear();
            self.references(s, t, &mut acc);
            self.references(t, s, &mut acc);
            acc.sort_unstable();
            acc.dedup();
            for &q in &acc {
                if q == (s, t) || self.trivial(q) {
                    continue;
                }
                let j = self.intern(q, &mut discover);
                self.rdeps[j].push(i);
            }
        }

        let mut queued = vec![true; self.pairs.len()];
        let mut work: VecDeque<usize> = (0..self.pairs.len()).collect();
        let mut round = 0;
        while let Some(i) = work.pop_front() {
            queued[i] = false;
            if self.removed[i].is_some() {
                continue;
            }
            let (s, t) = self.pairs[i];
            let cause = self.violation(s, t).or_else(|| self.violation(t, s));
            if let Some(cause) = cause {
                self.removed[i] = Some((round, cause));
                round += 1;
                for k in 0..self.rdeps[i].len() {
                    let r = self.rdeps[i][k];
                    if self.removed[r].is_none() && !queued[r] {
                        queued[r] = true;
                        work.push_back(r);
                    }
                }
            }
        }
    }

    pub fn is_related(&self, s: usize, t: usize) -> bool {
        self.related((s, t))
    }

    fn round(&self, p: Pair) -> Option<usize> {
        let p = key(p.0, p.1);
        if self.trivial(p) {
            return None;
        }
        self.ids.get(&p).and_then(|&i| self.removed[i].as_ref().map(|(r, _)| *r))
    }

    /// Replays removal causes from `(s, t)`, always descending into the
    /// answer that was ruled out first. Rounds strictly decrease, so the
    /// walk ends.
    pub fn witness(&mut self, s: usize, t: usize, left_len: usize) -> Witness {
        let side = |x: usize| if x < left_len { Side::Left } else { Side::Right };
        let mut steps = Vec::new();
        let mut visited = vec![s, t];
        let mut cur = (s, t);
        let conclusion;
        loop {
            let p = key(cur.0, cur.1);
            let Some(&i) = self.ids.get(&p) else {
                conclusion = "pair is related".to_string();
                break;
            };
            let Some((_, cause)) = self.removed[i].clone() else {
                conclusion = "pair is related".to_string();
                break;
            };
            match cause {
                Cause::Final { challenger } => {
                    let other = if challenger == p.0 { p.1 } else { p.0 };
                    conclusion = format!(
                        "{} {} is final but {} {} cannot reach a final state by silent steps",
                        side(challenger),
                        self.g.names[challenger],
                        side(other),
                        self.g.names[other]
                    );
                    break;
                }
                Cause::Move { challenger, label, target } => {
                    let other = if challenger == p.0 { p.1 } else { p.0 };
                    visited.extend([challenger, target, other]);
                    steps.push(WitnessStep {
                        side: side(challenger),
                        from: self.g.names[challenger].clone(),
                        label: self.g.labels[label as usize].clone(),
                        to: self.g.names[target].clone(),
                        other: self.g.names[other].clone(),
                    });
                    let mut options: Vec<Pair> =
                        self.g.out[other].iter().filter(|&&(b, _)| b == label).map(|&(_, o2)| (target, o2)).collect();
                    if label == TAU && self.mode == Mode::Branching {
                        options.push((target, other));
                    }
                    let next = options.into_iter().filter_map(|q| self.round(q).map(|r| (r, q))).min();
                    match next {
                        Some((_, q)) => cur = q,
                        None => {
                            conclusion = format!(
                                "{} {} has no answer to {}",
                                side(other),
                                self.g.names[other],
                                self.g.labels[label as usize]
                            );
                            break;
                        }
                    }
                }
            }
        }
        let touches_frontier = visited.iter().any(|&x| self.g.frontier[x]);
        Witness { steps, conclusion, touches_frontier }
    }
}
