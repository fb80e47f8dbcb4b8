//! Bounded language membership for queue automata.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automaton::{QConfiguration, QueueAutomaton};
use crate::error::{Error, Result};
use crate::lts::ExplorationBound;
use crate::symbol::ActionLabel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcceptVerdict {
    /// A path spelling the word (τ erased) from the root to a final configuration.
    Accepted { witness: Vec<(ActionLabel, QConfiguration)> },
    /// No accepting path within the bound. Not a proof of non-membership.
    Exhausted,
}

impl AcceptVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, AcceptVerdict::Accepted { .. })
    }
}

fn within_queue(bound: &ExplorationBound, c: &QConfiguration) -> bool {
    bound.max_queue_len.is_none_or(|k| c.queue.len() <= k)
}

/// Searches breadth-first over `(configuration, letters read)` pairs.
pub fn accepts(qa: &QueueAutomaton, word: &[String], bound: ExplorationBound) -> Result<AcceptVerdict> {
    if let Some(bad) = word.iter().find(|w| !qa.actions.contains(*w)) {
        return Err(Error::UnknownAction(bad.clone()));
    }
    type Node = (QConfiguration, usize);
    let root: Node = (qa.initial_configuration(), 0);
    let mut parent: HashMap<Node, Option<(Node, ActionLabel)>> = HashMap::new();
    let mut depth: HashMap<Node, usize> = HashMap::new();
    parent.insert(root.clone(), None);
    depth.insert(root.clone(), 0);
    let mut queue = VecDeque::from([root]);
    while let Some(node) = queue.pop_front() {
        let (cfg, pos) = &node;
        if *pos == word.len() && qa.is_final(cfg) {
            let mut witness = Vec::new();
            let mut cur = node.clone();
            while let Some(Some((prev, label))) = parent.get(&cur) {
                witness.push((label.clone(), cur.0.clone()));
                cur = prev.clone();
            }
            witness.reverse();
            return Ok(AcceptVerdict::Accepted { witness });
        }
        let d = depth[&node];
        if d >= bound.max_depth {
            continue;
        }
        for (label, next) in qa.step(cfg)? {
            let next_pos = match &label {
                ActionLabel::Tau => *pos,
                ActionLabel::Visible(a) if *pos < word.len() && word[*pos] == *a => pos + 1,
                ActionLabel::Visible(_) => continue,
            };
            if !within_queue(&bound, &next) {
                continue;
            }
            let key = (next, next_pos);
            if parent.contains_key(&key) {
                continue;
            }
            if parent.len() >= bound.max_states {
                return Ok(AcceptVerdict::Exhausted);
            }
            parent.insert(key.clone(), Some((node.clone(), label)));
            depth.insert(key.clone(), d + 1);
            queue.push_back(key);
        }
    }
    Ok(AcceptVerdict::Exhausted)
}

/// Configurations reachable by τ-steps alone, within the queue bound.
fn tau_closure(
    qa: &QueueAutomaton,
    start: BTreeSet<QConfiguration>,
    bound: &ExplorationBound,
) -> Result<BTreeSet<QConfiguration>> {
    let mut seen = start.clone();
    let mut stack: Vec<QConfiguration> = start.into_iter().collect();
    while let Some(c) = stack.pop() {
        for (label, next) in qa.step(&c)? {
            if label.is_tau()
                && within_queue(bound, &next)
                && seen.len() < bound.max_states
                && seen.insert(next.clone())
            {
                stack.push(next);
            }
        }
    }
    Ok(seen)
}

/// Every word of length `<= max_len` accepted within `bound`, found by a
/// prefix-pruned search over sets of configurations. `bound.max_queue_len`
/// should be set when the automaton can grow its queue silently.
pub fn accepted_words(qa: &QueueAutomaton, max_len: usize, bound: ExplorationBound) -> Result<BTreeSet<Vec<String>>> {
    let mut result = BTreeSet::new();
    let start = tau_closure(qa, BTreeSet::from([qa.initial_configuration()]), &bound)?;
    let mut stack = vec![(Vec::<String>::new(), start)];
    while let Some((word, configs)) = stack.pop() {
        if configs.iter().any(|c| qa.is_final(c)) {
            result.insert(word.clone());
        }
        if word.len() == max_len {
            continue;
        }
        let mut by_action: HashMap<String, BTreeSet<QConfiguration>> = HashMap::new();
        for c in &configs {
            for (label, next) in qa.step(c)? {
                if let ActionLabel::Visible(a) = label {
                    if within_queue(&bound, &next) {
                        by_action.entry(a).or_default().insert(next);
                    }
                }
            }
        }
        for (a, next) in by_action {
            let mut w = word.clone();
            w.push(a);
            stack.push((w, tau_closure(qa, next, &bound)?));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn fig1_accepts_square_words() {
        let qa = corpus::load_qa("fig1").unwrap();
        let b = ExplorationBound::depth(12).with_queue(4);
        match accepts(&qa, &word("abab"), b).unwrap() {
            AcceptVerdict::Accepted { witness } => {
                let visible: Vec<String> =
                    witness.iter().filter(|(a, _)| !a.is_tau()).map(|(a, _)| a.to_string()).collect();
                assert_eq!(visible, word("abab"));
                assert!(qa.is_final(&witness.last().unwrap().1));
            }
            AcceptVerdict::Exhausted => panic!("abab rejected"),
        }
        assert_eq!(accepts(&qa, &word("aba"), b).unwrap(), AcceptVerdict::Exhausted);
    }

    #[test]
    fn fig2_accepts_anbncn() {
        let qa = corpus::load_qa("fig2").unwrap();
        let b = ExplorationBound::depth(20).with_queue(6);
        assert!(accepts(&qa, &word("aabbcc"), b).unwrap().is_accepted());
        assert!(!accepts(&qa, &word("aabbc"), b).unwrap().is_accepted());
    }

    #[test]
    fn unknown_action_is_an_error() {
        let qa = corpus::load_qa("fig1").unwrap();
        assert!(accepts(&qa, &word("abc"), ExplorationBound::depth(5)).is_err());
    }

    #[test]
    fn accepted_words_agree_with_accepts() {
        let qa = corpus::load_qa("fig1").unwrap();
        let b = ExplorationBound::depth(20).with_queue(4);
        let lang = accepted_words(&qa, 4, b).unwrap();
        for len in 0..=4usize {
            for bits in 0..(1u32 << len) {
                let w: Vec<String> =
                    (0..len).map(|i| if bits >> i & 1 == 1 { "b".to_string() } else { "a".to_string() }).collect();
                assert_eq!(lang.contains(&w), accepts(&qa, &w, b).unwrap().is_accepted(), "{w:?}");
            }
        }
    }
}
