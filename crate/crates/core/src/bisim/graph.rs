//! Disjoint unions of finite LTSs with interned labels.

use std::collections::BTreeMap;

use crate::lts::FiniteLts;
use crate::symbol::ActionLabel;

pub(crate) const TAU: u32 = 0;

#[derive(Debug, Clone)]
pub(crate) struct Combined {
    pub out: Vec<Vec<(u32, usize)>>,
    pub finals: Vec<bool>,
    pub frontier: Vec<bool>,
    pub names: Vec<String>,
    pub labels: Vec<String>,
    /// Index of the first state of each part.
    pub offsets: Vec<usize>,
}

impl Combined {
    pub fn new(parts: &[&FiniteLts]) -> Self {
        let mut interned: BTreeMap<&ActionLabel, u32> = BTreeMap::new();
        for lts in parts {
            for (_, a, _) in lts.edges() {
                if !a.is_tau() {
                    interned.entry(a).or_insert(0);
                }
            }
        }
        let mut labels = vec!["tau".to_string()];
        for (i, (a, id)) in interned.iter_mut().enumerate() {
            *id = i as u32 + 1;
            labels.push(a.to_string());
        }
        let mut g = Combined {
            out: Vec::new(),
            finals: Vec::new(),
            frontier: Vec::new(),
            names: Vec::new(),
            labels,
            offsets: Vec::new(),
        };
        for lts in parts {
            let base = g.out.len();
            g.offsets.push(base);
            for s in 0..lts.len() {
                let edges =
                    lts.out[s].iter().map(|(a, t)| (if a.is_tau() { TAU } else { interned[a] }, base + t)).collect();
                g.out.push(edges);
                g.finals.push(lts.finals[s]);
                g.frontier.push(lts.frontier[s]);
                g.names.push(lts.states[s].clone());
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn root(&self, part: usize, lts: &FiniteLts) -> usize {
        self.offsets[part] + lts.root
    }

    pub fn add_label(&mut self, name: &str) -> u32 {
        self.labels.push(name.to_string());
        self.labels.len() as u32 - 1
    }

    /// Gives every frontier state a `‹cut›` self-loop and drops its finality.
    pub fn sealed(&self) -> Combined {
        let mut g = self.clone();
        if g.frontier.iter().any(|&f| f) {
            let cut = g.add_label("‹cut›");
            for s in 0..g.len() {
                if g.frontier[s] {
                    g.out[s].push((cut, s));
                    g.finals[s] = false;
                }
            }
        }
        g
    }

    pub fn has_frontier(&self) -> bool {
        self.frontier.iter().any(|&f| f)
    }
}
