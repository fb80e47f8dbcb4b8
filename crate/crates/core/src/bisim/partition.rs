//! Partition refinement for strong and branching bisimilarity.
//!
//! Branching mode first contracts τ-strongly-connected components, so the
//! inert τ-steps inside a block form an acyclic graph. A block is unstable for
//! a splitter `(a, C)` exactly when some of its bottom states (no inert τ out)
//! miss the set of states that reach an `a`-step into `C` via inert τ-steps.
//! A split can turn states into new bottom states; then every block is
//! re-queued as a splitter.

use std::collections::{BTreeMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::graph::{Combined, TAU};
use super::Mode;

/// A disjoint cover of the states of an LTS (or of a union of two).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Renumbers blocks by their smallest member.
    pub(crate) fn from_labels(labels: &[usize]) -> Self {
        let mut rename: BTreeMap<usize, usize> = BTreeMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (s, l) in labels.iter().enumerate() {
            let next = rename.len();
            let b = *rename.entry(*l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(s);
            block_of.push(b);
        }
        Partition { block_of, blocks }
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn same_block(&self, s: usize, t: usize) -> bool {
        self.block_of[s] == self.block_of[t]
    }
}

/// Coarsest bisimulation partition of `g` (already sealed if needed).
///
/// Finality enters through the initial partition. In strong mode it splits
/// final from non-final states. In branching mode it splits states that can
/// reach a final state by τ-steps alone from those that cannot: every
/// branching bisimulation respects that property, and given it, the
/// finality clause holds automatically.
pub(crate) fn refine(g: &Combined, mode: Mode) -> Partition {
    let labels = match mode {
        Mode::Strong => {
            let init: Vec<usize> = g.finals.iter().map(|&f| f as usize).collect();
            let mut r = Refiner::new(&g.out, &init, g.labels.len(), false);
            r.run();
            r.block_of
        }
        Mode::Branching => {
            let (comp, out) = contract_tau_sccs(&g.out);
            let mut init = vec![0; out.len()];
            for (s, &c) in comp.iter().enumerate() {
                if g.finals[s] {
                    init[c] = 1;
                }
            }
            silent_termination(&out, &mut init);
            let mut r = Refiner::new(&out, &init, g.labels.len(), true);
            r.run();
            comp.iter().map(|&c| r.block_of[c]).collect()
        }
    };
    Partition::from_labels(&labels)
}

/// Extends `can` (1 = final) backwards along τ-steps.
fn silent_termination(out: &[Vec<(u32, usize)>], can: &mut [usize]) {
    let mut pred = vec![Vec::new(); out.len()];
    for (s, es) in out.iter().enumerate() {
        for &(a, t) in es {
            if a == TAU {
                pred[t].push(s);
            }
        }
    }
    let mut stack: Vec<usize> = (0..out.len()).filter(|&s| can[s] == 1).collect();
    while let Some(t) = stack.pop() {
        for &s in &pred[t] {
            if can[s] == 0 {
                can[s] = 1;
                stack.push(s);
            }
        }
    }
}

/// Maps every state to its τ-SCC and returns the quotient graph, with τ-steps
/// inside a component dropped.
fn contract_tau_sccs(out: &[Vec<(u32, usize)>]) -> (Vec<usize>, Vec<Vec<(u32, usize)>>) {
    let n = out.len();
    let mut tg: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        tg.add_node(());
    }
    for (s, es) in out.iter().enumerate() {
        for &(a, t) in es {
            if a == TAU {
                tg.add_edge(NodeIndex::new(s), NodeIndex::new(t), ());
            }
        }
    }
    let mut sccs = tarjan_scc(&tg);
    // Number components by their smallest state for a stable result.
    for c in &mut sccs {
        c.sort();
    }
    sccs.sort_by_key(|c| c[0]);
    let mut comp = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for v in c {
            comp[v.index()] = i;
        }
    }
    let mut qout = vec![Vec::new(); sccs.len()];
    for (s, es) in out.iter().enumerate() {
        for &(a, t) in es {
            if a == TAU && comp[s] == comp[t] {
                continue;
            }
            qout[comp[s]].push((a, comp[t]));
        }
    }
    for es in &mut qout {
        es.sort();
        es.dedup();
    }
    (comp, qout)
}

struct Refiner {
    branching: bool,
    n_labels: usize,
    out: Vec<Vec<(u32, usize)>>,
    pred: Vec<Vec<(u32, usize)>>,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    queued: Vec<bool>,
    work: VecDeque<usize>,
    mark: Vec<u32>,
    stamp: u32,
}

impl Refiner {
    fn new(out: &[Vec<(u32, usize)>], init: &[usize], n_labels: usize, branching: bool) -> Self {
        let n = out.len();
        let mut pred = vec![Vec::new(); n];
        for (s, es) in out.iter().enumerate() {
            for &(a, t) in es {
                pred[t].push((a, s));
            }
        }
        let p0 = Partition::from_labels(init);
        let k = p0.len();
        Refiner {
            branching,
            n_labels,
            out: out.to_vec(),
            pred,
            block_of: p0.block_of,
            blocks: p0.blocks,
            queued: vec![true; k],
            work: (0..k).collect(),
            mark: vec![0; n],
            stamp: 0,
        }
    }

    fn inert(&self, a: u32, s: usize, t: usize) -> bool {
        self.branching && a == TAU && self.block_of[s] == self.block_of[t]
    }

    fn is_bottom(&self, s: usize) -> bool {
        !self.out[s].iter().any(|&(a, t)| self.inert(a, s, t))
    }

    fn push(&mut self, b: usize) {
        if !self.queued[b] {
            self.queued[b] = true;
            self.work.push_back(b);
        }
    }

    fn run(&mut self) {
        while let Some(c) = self.work.pop_front() {
            self.queued[c] = false;
            let splitter = self.blocks[c].clone();
            for a in 0..self.n_labels as u32 {
                self.split_on(&splitter, a);
            }
        }
    }

    fn split_on(&mut self, splitter: &[usize], a: u32) {
        // Direct a-predecessors of the splitter, grouped by block.
        let mut direct: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &t in splitter {
            for &(l, s) in &self.pred[t] {
                if l == a && !self.inert(l, s, t) {
                    direct.entry(self.block_of[s]).or_default().push(s);
                }
            }
        }
        for (b, seeds) in direct {
            self.stamp += 1;
            let stamp = self.stamp;
            let mut pos = Vec::new();
            for s in seeds {
                if self.mark[s] != stamp {
                    self.mark[s] = stamp;
                    pos.push(s);
                }
            }
            if self.branching {
                let mut i = 0;
                while i < pos.len() {
                    let s = pos[i];
                    for &(l, p) in &self.pred[s] {
                        if l == TAU && self.block_of[p] == b && self.mark[p] != stamp {
                            self.mark[p] = stamp;
                            pos.push(p);
                        }
                    }
                    i += 1;
                }
            }
            if pos.len() < self.blocks[b].len() {
                self.split(b, stamp);
            }
        }
    }

    /// Moves the unmarked members of block `b` into a new block.
    fn split(&mut self, b: usize, stamp: u32) {
        let members = std::mem::take(&mut self.blocks[b]);
        let was_bottom: Vec<bool> =
            if self.branching { members.iter().map(|&s| self.is_bottom(s)).collect() } else { Vec::new() };
        let (keep, moved): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&s| self.mark[s] == stamp);
        let nb = self.blocks.len();
        for &s in &moved {
            self.block_of[s] = nb;
        }
        self.blocks[b] = keep;
        self.blocks.push(moved);
        self.queued.push(false);
        let new_bottom = self.branching && members.iter().zip(&was_bottom).any(|(&s, &was)| !was && self.is_bottom(s));
        if new_bottom {
            for blk in 0..self.blocks.len() {
                self.push(blk);
            }
        } else {
            self.push(b);
            self.push(nb);
        }
    }
}
