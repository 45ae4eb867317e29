//! Bounded search for proofs that a word is trivial.
//!
//! A derivation starts from the freely reduced target and repeatedly inserts
//! a cyclic rotation of a known-trivial word (or of its inverse) at some
//! position, freely reducing after each insertion. Reaching the empty word
//! proves the target trivial, whatever heuristics found the steps, because
//! every inserted word is a conjugate of a relator.
//!
//! The search works on cyclic words: a move picks a rotation `ρ = s t` of a
//! pool word and an occurrence of `s` in the current cyclic word, and
//! replaces `s` by `t^-1`. On the linear representative this is the
//! insertion of `ρ^-1` just before `s`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

use super::word::Word;

/// Default bound on the number of insertions.
pub const DEFAULT_DEPTH: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("no derivation found within depth {depth} ({explored} states explored)")]
    Exhausted { depth: usize, explored: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_states: usize,
    /// Cyclic words longer than the target and every pool word by more
    /// than this are not explored.
    pub slack: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_depth: DEFAULT_DEPTH, max_states: 200_000, slack: 2 }
    }
}

impl SearchConfig {
    pub fn with_depth(depth: usize) -> Self {
        SearchConfig { max_depth: depth, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub position: usize,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Word,
    pub steps: Vec<Insertion>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Check a derivation mechanically: every inserted word must be a rotation
/// of a pool word or of its inverse, and the final word must be empty.
pub fn replay(d: &Derivation, pool: &[Word]) -> bool {
    let classes: HashSet<Word> = pool.iter().map(Word::cyclic_class).collect();
    let mut w = d.start.clone();
    for step in &d.steps {
        if step.position > w.len() || !step.word.is_cyclically_reduced() || !classes.contains(&step.word.cyclic_class())
        {
            return false;
        }
        let l = w.letters();
        w = Word::new(l[..step.position].iter().chain(step.word.letters()).chain(&l[step.position..]).copied());
    }
    w.is_empty()
}

/// Prove `target` trivial from the pool of known-trivial words.
pub fn assert_trivial_word(pool: &[Word], target: &Word, cfg: SearchConfig) -> Result<Derivation, SearchError> {
    let start = target.clone();
    if start.is_empty() {
        return Ok(Derivation { start, steps: vec![] });
    }
    let mut rots: Vec<Word> = Vec::new();
    let mut seen_rot = HashSet::new();
    for r in pool {
        let c = r.cyclic_reduce();
        if c.is_empty() {
            continue;
        }
        for base in [c.clone(), c.inverse()] {
            for rho in base.rotations() {
                if seen_rot.insert(rho.clone()) {
                    rots.push(rho);
                }
            }
        }
    }

    let longest = pool.iter().map(Word::len).max().unwrap_or(0);
    let max_len = start.cyclic_reduce().len().max(longest) + cfg.slack;

    struct Node {
        word: Word,
        parent: usize,
        step: Option<Insertion>,
    }
    let mut nodes = vec![Node { word: start.clone(), parent: 0, step: None }];
    let mut visited: HashSet<Word> = HashSet::new();
    visited.insert(start.cyclic_canonical());
    // (core length, depth, insertion order) gives a deterministic best-first order
    let mut queue = BinaryHeap::new();
    queue.push(Reverse((start.cyclic_reduce().len(), 0usize, 0usize)));

    while let Some(Reverse((_, depth, idx))) = queue.pop() {
        if depth >= cfg.max_depth {
            continue;
        }
        let (offset, core) = nodes[idx].word.cyclic_split();
        let k = core.letters();
        let n = k.len();
        for rho in &rots {
            let r = rho.letters();
            for o in 0..n {
                let mut l = 0;
                while l < r.len() && l < n && k[(o + l) % n] == r[l] {
                    l += 1;
                }
                if l == 0 || n + r.len() > max_len + 2 * l {
                    continue;
                }
                let ins = Insertion { position: offset + o, word: rho.inverse() };
                let w = nodes[idx].word.letters();
                let next =
                    Word::new(w[..ins.position].iter().chain(ins.word.letters()).chain(&w[ins.position..]).copied());
                if !visited.insert(next.cyclic_canonical()) {
                    continue;
                }
                let done = next.is_empty();
                let len = next.cyclic_reduce().len();
                nodes.push(Node { word: next, parent: idx, step: Some(ins) });
                let id = nodes.len() - 1;
                if done {
                    return Ok(Derivation { start, steps: path(&nodes, id, |n| (n.parent, n.step.clone())) });
                }
                if nodes.len() >= cfg.max_states {
                    return Err(SearchError::Exhausted { depth: cfg.max_depth, explored: nodes.len() });
                }
                queue.push(Reverse((len, depth + 1, id)));
            }
        }
    }
    Err(SearchError::Exhausted { depth: cfg.max_depth, explored: nodes.len() })
}

fn path<N>(nodes: &[N], mut id: usize, link: impl Fn(&N) -> (usize, Option<Insertion>)) -> Vec<Insertion> {
    let mut steps = Vec::new();
    while let (parent, Some(step)) = link(&nodes[id]) {
        steps.push(step);
        id = parent;
    }
    steps.reverse();
    steps
}
