use crate::error::{Error, Result};

use super::FiniteMultigraph;

/// Rooted spanning tree stored as a parent map `v → (parent, edge id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<Option<(usize, usize)>>,
}

impl SpanningTree {
    pub fn from_parents(root: usize, parent: Vec<Option<(usize, usize)>>) -> Self {
        Self { root, parent }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    /// Sorted edge ids; identifies the tree independently of its root.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.parent.iter().flatten().map(|(_, e)| *e).collect();
        ids.sort_unstable();
        ids
    }

    /// Edges as `(child, parent)` pairs.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|(u, _)| (v, u)))
            .collect()
    }

    /// Checks spanning, acyclicity and edge consistency against `graph`.
    pub fn is_spanning_tree_of(&self, graph: &FiniteMultigraph) -> bool {
        let n = graph.num_vertices();
        if self.parent.len() != n || self.root >= n || self.parent[self.root].is_some() {
            return false;
        }
        if self.parent.iter().flatten().count() != n - 1 {
            return false;
        }
        for (v, p) in self.parent.iter().enumerate() {
            if let Some((u, e)) = p {
                if *e >= graph.num_edges() {
                    return false;
                }
                let (a, b) = graph.edge(*e);
                if !((a == v && b == *u) || (b == v && a == *u)) {
                    return false;
                }
            }
        }
        // Every vertex must reach the root within n steps.
        (0..n).all(|v| self.ancestors(v).map(|a| *a.last().unwrap() == self.root).unwrap_or(false))
    }

    // v, parent(v), ..., root; None on a cycle.
    fn ancestors(&self, v: usize) -> Option<Vec<usize>> {
        let mut out = vec![v];
        let mut u = v;
        while let Some((p, _)) = self.parent[u] {
            if out.len() > self.parent.len() {
                return None;
            }
            out.push(p);
            u = p;
        }
        Some(out)
    }

    /// The unique vertex path from `u` to `v` in the tree.
    pub fn tree_path(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        let n = self.parent.len();
        for w in [u, v] {
            if w >= n {
                return Err(Error::InvalidGraph(format!("vertex {w} not in tree")));
            }
        }
        let up_u = self
            .ancestors(u)
            .ok_or_else(|| Error::InvalidGraph("parent map has a cycle".into()))?;
        let up_v = self
            .ancestors(v)
            .ok_or_else(|| Error::InvalidGraph("parent map has a cycle".into()))?;
        let on_v: std::collections::HashMap<usize, usize> =
            up_v.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let (i, &meet) = up_u
            .iter()
            .enumerate()
            .find(|(_, w)| on_v.contains_key(w))
            .ok_or_else(|| Error::InvalidGraph("vertices in different components".into()))?;
        let mut path = up_u[..=i].to_vec();
        path.extend(up_v[..on_v[&meet]].iter().rev());
        Ok(path)
    }
}
