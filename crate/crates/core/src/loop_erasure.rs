//! Chronological loop-erasure.
//!
//! [`loop_erase`] follows the inductive definition (jump to the last visit of the
//! current point, continue from the next step). [`OnlineEraser`] erases each cycle
//! the moment it closes. Both give the same result on finite paths; the property
//! tests keep it that way.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};

/// A self-avoiding path `u_0, ..., u_J` with, for each `u_j`, the index of the
/// source-path visit that survived erasure (the last visit to `u_j`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopErasedPath<S> {
    pub states: Vec<S>,
    pub source_index: Vec<usize>,
}

impl<S: Eq + Hash> LoopErasedPath<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.states.len());
        self.states.iter().all(|s| seen.insert(s))
    }
}

/// Loop-erasure by the last-visit construction.
pub fn loop_erase<S: Clone + Eq + Hash>(path: &[S]) -> Result<LoopErasedPath<S>> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut last: HashMap<&S, usize> = HashMap::with_capacity(path.len());
    for (i, s) in path.iter().enumerate() {
        last.insert(s, i);
    }
    let mut states = Vec::new();
    let mut source_index = Vec::new();
    let mut k = last[&path[0]];
    states.push(path[0].clone());
    source_index.push(k);
    while k + 1 < path.len() {
        let next = &path[k + 1];
        k = last[next];
        states.push(next.clone());
        source_index.push(k);
    }
    let out = LoopErasedPath {
        states,
        source_index,
    };
    debug_assert!(out.is_self_avoiding());
    Ok(out)
}

/// Loop-erasure of `prefix ⧺ path`; source indices refer to the concatenation.
pub fn loop_erase_with_prefix<S: Clone + Eq + Hash>(
    prefix: &[S],
    path: &[S],
) -> Result<LoopErasedPath<S>> {
    let mut full = Vec::with_capacity(prefix.len() + path.len());
    full.extend_from_slice(prefix);
    full.extend_from_slice(path);
    loop_erase(&full)
}

/// Incremental loop-erasure: each push erases the cycle it closes.
#[derive(Debug, Clone)]
pub struct OnlineEraser<S> {
    states: Vec<S>,
    source_index: Vec<usize>,
    position: HashMap<S, usize>,
    pushed: usize,
}

impl<S: Clone + Eq + Hash> Default for OnlineEraser<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Clone + Eq + Hash> OnlineEraser<S> {
    pub fn new() -> Self {
        Self {
            states: Vec::new(),
            source_index: Vec::new(),
            position: HashMap::new(),
            pushed: 0,
        }
    }

    pub fn push(&mut self, v: S) {
        match self.position.get(&v) {
            Some(&p) => {
                for s in self.states.drain(p + 1..) {
                    self.position.remove(&s);
                }
                self.source_index.truncate(p + 1);
                self.source_index[p] = self.pushed;
            }
            None => {
                self.position.insert(v.clone(), self.states.len());
                self.states.push(v);
                self.source_index.push(self.pushed);
            }
        }
        self.pushed += 1;
    }

    pub fn current(&self) -> &[S] {
        &self.states
    }

    pub fn contains(&self, v: &S) -> bool {
        self.position.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn snapshot(&self) -> LoopErasedPath<S> {
        LoopErasedPath {
            states: self.states.clone(),
            source_index: self.source_index.clone(),
        }
    }
}

/// Erases only the cycles that start and end at a state of `z`, at the moment
/// they close. The result need not be self-avoiding off `z`.
pub fn partial_loop_erase<S: Clone + Eq + Hash>(path: &[S], z: &HashSet<S>) -> Result<Vec<S>> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut out: Vec<S> = Vec::with_capacity(path.len());
    // Positions of the z-states currently in `out`; each occurs at most once.
    let mut position: HashMap<S, usize> = HashMap::new();
    for v in path {
        if let Some(&p) = position.get(v) {
            for s in out.drain(p + 1..) {
                if z.contains(&s) {
                    position.remove(&s);
                }
            }
            continue;
        }
        if z.contains(v) {
            position.insert(v.clone(), out.len());
        }
        out.push(v.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(path: &[char]) -> Vec<char> {
        loop_erase(path).unwrap().states
    }

    fn online(path: &[char]) -> Vec<char> {
        let mut e = OnlineEraser::new();
        path.iter().for_each(|&c| e.push(c));
        e.current().to_vec()
    }

    #[test]
    fn empty_path_is_rejected() {
        assert!(matches!(loop_erase::<u8>(&[]), Err(Error::EmptyPath)));
        assert!(matches!(
            partial_loop_erase::<u8>(&[], &HashSet::new()),
            Err(Error::EmptyPath)
        ));
    }

    #[test]
    fn injective_path_is_unchanged() {
        assert_eq!(le(&['a', 'b', 'c']), vec!['a', 'b', 'c']);
        assert_eq!(online(&['a', 'b', 'c']), vec!['a', 'b', 'c']);
    }

    #[test]
    fn definition_examples() {
        assert_eq!(le(&['a', 'b', 'c', 'b', 'd']), vec!['a', 'b', 'd']);
        assert_eq!(
            loop_erase(&[0, 1, 0, 1, 2]).unwrap().states,
            vec![0, 1, 2]
        );
        let p = loop_erase(&['a', 'b', 'c', 'b', 'd']).unwrap();
        assert_eq!(p.source_index, vec![0, 3, 4]);
    }

    #[test]
    fn online_pops_cycles() {
        assert_eq!(online(&['a', 'b', 'a']), vec!['a']);
        let mut e = OnlineEraser::new();
        for c in ['a', 'b', 'c', 'b', 'd'] {
            e.push(c);
        }
        assert_eq!(e.snapshot(), loop_erase(&['a', 'b', 'c', 'b', 'd']).unwrap());
    }

    #[test]
    fn partial_erasure_examples() {
        let path = ['a', 'b', 'c', 'b', 'a', 'd'];
        let all: HashSet<char> = path.iter().copied().collect();
        assert_eq!(partial_loop_erase(&path, &all).unwrap(), le(&path));
        assert_eq!(partial_loop_erase(&path, &HashSet::new()).unwrap(), path.to_vec());
        let z: HashSet<char> = ['a'].into_iter().collect();
        assert_eq!(partial_loop_erase(&path, &z).unwrap(), vec!['a', 'd']);
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(
            loop_erase_with_prefix(&[], &['b', 'a', 'c']).unwrap(),
            loop_erase(&['b', 'a', 'c']).unwrap()
        );
        assert_eq!(
            loop_erase_with_prefix(&['a'], &['b', 'a', 'c']).unwrap().states,
            vec!['a', 'c']
        );
        assert_eq!(
            loop_erase_with_prefix(&['a', 'b'], &['b', 'c']).unwrap().states,
            vec!['a', 'b', 'c']
        );
    }

    #[test]
    fn fresh_state_extends_erasure() {
        let path = vec![1, 2, 1, 3, 4];
        let mut longer = path.clone();
        longer.push(9);
        let mut expect = le_u(&path);
        expect.push(9);
        assert_eq!(le_u(&longer), expect);
    }

    fn le_u(p: &[i32]) -> Vec<i32> {
        loop_erase(p).unwrap().states
    }
}
