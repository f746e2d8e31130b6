use std::collections::HashSet;
use std::hash::Hash;

/// The path watched only at its visits to a set `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPath<S> {
    pub states: Vec<S>,
    /// `source_index[j]` is the index in the source path of `states[j]`.
    pub source_index: Vec<usize>,
}

/// Restricts `path` to its visits to `z`, keeping order. Index 0 is included only
/// when the path starts inside `z`.
pub fn induce_on_subset<S: Clone + Eq + Hash>(path: &[S], z: &HashSet<S>) -> InducedPath<S> {
    let (source_index, states) = path
        .iter()
        .enumerate()
        .filter(|(_, s)| z.contains(*s))
        .map(|(i, s)| (i, s.clone()))
        .unzip();
    InducedPath {
        states,
        source_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_space_is_identity() {
        let path = vec!['a', 'b', 'a', 'c'];
        let z: HashSet<char> = path.iter().copied().collect();
        let ind = induce_on_subset(&path, &z);
        assert_eq!(ind.states, path);
        assert_eq!(ind.source_index, vec![0, 1, 2, 3]);
    }

    #[test]
    fn disjoint_set_is_empty() {
        let z: HashSet<char> = ['x'].into_iter().collect();
        let ind = induce_on_subset(&['a', 'b'], &z);
        assert!(ind.states.is_empty() && ind.source_index.is_empty());
    }

    #[test]
    fn hand_trace() {
        let z: HashSet<char> = ['a', 'c'].into_iter().collect();
        let ind = induce_on_subset(&['a', 'b', 'c', 'b', 'a'], &z);
        assert_eq!(ind.states, vec!['a', 'c', 'a']);
        assert_eq!(ind.source_index, vec![0, 2, 4]);
    }
}
