//! Strong and branching bisimilarity on finite, possibly truncated LTSs.
//!
//! A check runs in two stages. Partition refinement on the disjoint union,
//! with every frontier state sealed by a `‹cut›` self-loop, answers most
//! questions quickly. When it separates the roots and a frontier is present,
//! the answer is re-derived by a pairwise greatest fixpoint in which frontier
//! states are wildcards; only that engine can say "distinguished" about a
//! truncation, and it also produces the witness.

mod graph;
pub mod naive;
mod partition;
mod relation;

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::lts::FiniteLts;
use crate::symbol::ActionLabel;
use graph::Combined;
pub use partition::Partition;
use relation::Engine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Strong,
    Branching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One challenge in a distinguishing game: `from --label--> to` on `side`,
/// while the opponent sits in `other`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub side: Side,
    pub from: String,
    pub label: String,
    pub to: String,
    pub other: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub steps: Vec<WitnessStep>,
    pub conclusion: String,
    pub touches_frontier: bool,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for st in &self.steps {
            writeln!(f, "{:>5}: {} --{}--> {}    (opponent at {})", st.side, st.from, st.label, st.to, st.other)?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BisimVerdict {
    RelatedUpToBound,
    Distinguished(Witness),
}

impl BisimVerdict {
    pub fn is_related(&self) -> bool {
        matches!(self, BisimVerdict::RelatedUpToBound)
    }

    /// `false` for a definitive inequivalence of the untruncated graphs.
    pub fn witness_touches_frontier(&self) -> bool {
        match self {
            BisimVerdict::RelatedUpToBound => false,
            BisimVerdict::Distinguished(w) => w.touches_frontier,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            BisimVerdict::RelatedUpToBound => None,
            BisimVerdict::Distinguished(w) => Some(w),
        }
    }
}

fn check(a: &FiniteLts, b: &FiniteLts, mode: Mode) -> BisimVerdict {
    let g = Combined::new(&[a, b]);
    let (ra, rb) = (g.root(0, a), g.root(1, b));
    let sealed = partition::refine(&g.sealed(), mode);
    if sealed.same_block(ra, rb) {
        return BisimVerdict::RelatedUpToBound;
    }
    let mut engine = Engine::new(&g, mode);
    engine.solve(&[(ra, rb)]);
    if engine.is_related(ra, rb) {
        debug_assert!(g.has_frontier(), "refinement and fixpoint disagree on a frontier-free union");
        return BisimVerdict::RelatedUpToBound;
    }
    BisimVerdict::Distinguished(engine.witness(ra, rb, a.len()))
}

pub fn strong_bisim(a: &FiniteLts, b: &FiniteLts) -> BisimVerdict {
    check(a, b, Mode::Strong)
}

pub fn branching_bisim(a: &FiniteLts, b: &FiniteLts) -> BisimVerdict {
    check(a, b, Mode::Branching)
}

pub fn bisim(a: &FiniteLts, b: &FiniteLts, mode: Mode) -> BisimVerdict {
    check(a, b, mode)
}

/// Coarsest partition of one sealed LTS.
pub fn coarsest_partition(lts: &FiniteLts, mode: Mode) -> Partition {
    partition::refine(&Combined::new(&[lts]).sealed(), mode)
}

/// Coarsest partition of the sealed disjoint union; states of `b` are
/// numbered from `a.len()`.
pub fn union_partition(a: &FiniteLts, b: &FiniteLts, mode: Mode) -> Partition {
    partition::refine(&Combined::new(&[a, b]).sealed(), mode)
}

/// τ-edges `(source, target)` whose endpoints are branching bisimilar. On a
/// truncation, frontier states are wildcards, so this is an upper bound.
pub fn inert_taus(lts: &FiniteLts) -> BTreeSet<(usize, usize)> {
    let taus: Vec<(usize, usize)> = lts.edges().filter(|(_, a, _)| a.is_tau()).map(|(s, _, t)| (s, t)).collect();
    let g = Combined::new(&[lts]);
    if !g.has_frontier() {
        let p = partition::refine(&g, Mode::Branching);
        return taus.into_iter().filter(|&(s, t)| p.same_block(s, t)).collect();
    }
    let mut engine = Engine::new(&g, Mode::Branching);
    engine.solve(&taus);
    taus.into_iter().filter(|&(s, t)| engine.is_related(s, t)).collect()
}

/// A random frontier-free LTS with `n` states, visible actions `a0..`, and
/// roughly `tau_density` of its edges silent.
pub fn random_lts<R: Rng>(rng: &mut R, n: usize, actions: usize, tau_density: f64) -> FiniteLts {
    let edges_n = rng.gen_range(0..=2 * n);
    let mut edges = Vec::with_capacity(edges_n);
    for _ in 0..edges_n {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let label = if actions == 0 || rng.gen_bool(tau_density) {
            ActionLabel::Tau
        } else {
            ActionLabel::Visible(format!("a{}", rng.gen_range(0..actions)))
        };
        edges.push((s, label, t));
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    FiniteLts::from_edges(n, edges, 0, finals)
}

/// Whether states `s` and `t` of one frontier-free LTS share a block of the
/// coarsest partition. Exposed for cross-checking against the oracle.
pub fn partition_relation(lts: &FiniteLts, mode: Mode) -> Vec<Vec<bool>> {
    let p = coarsest_partition(lts, mode);
    (0..lts.len()).map(|s| (0..lts.len()).map(|t| p.same_block(s, t)).collect()).collect()
}
