use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected multigraph on `0..n`; parallel edges allowed, loops forbidden.
/// Edge ids are positions in the edge list. Serializes as an [`EdgeListDoc`] and
/// reads either document form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct FiniteMultigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    // (edge id, other endpoint)
    incident: Vec<Vec<(usize, usize)>>,
}

/// JSON adjacency form: `adjacency[v]` lists `[neighbour, multiplicity]` pairs and
/// must be symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjacencyDoc {
    pub adjacency: Vec<Vec<(usize, usize)>>,
}

/// Edge-list form: `{"vertices": n, "edges": [[u, v], ...]}`; parallel edges
/// are repeated entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeListDoc {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphDoc {
    Adjacency(AdjacencyDoc),
    EdgeList(EdgeListDoc),
}

impl TryFrom<GraphDoc> for FiniteMultigraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        match doc {
            GraphDoc::Adjacency(a) => Self::from_adjacency(&a),
            GraphDoc::EdgeList(e) => Self::new(e.vertices, e.edges),
        }
    }
}

impl From<FiniteMultigraph> for GraphDoc {
    fn from(g: FiniteMultigraph) -> Self {
        GraphDoc::EdgeList(EdgeListDoc {
            vertices: g.n,
            edges: g.edges,
        })
    }
}

impl FiniteMultigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            incident[u].push((id, v));
            incident[v].push((id, u));
        }
        Ok(Self { n, edges, incident })
    }

    pub fn from_adjacency(doc: &AdjacencyDoc) -> Result<Self> {
        let n = doc.adjacency.len();
        let mult = |u: usize, v: usize| -> usize {
            doc.adjacency[u]
                .iter()
                .filter(|(w, _)| *w == v)
                .map(|(_, m)| *m)
                .sum()
        };
        let mut edges = Vec::new();
        for (u, row) in doc.adjacency.iter().enumerate() {
            let mut seen = HashSet::new();
            for &(v, _) in row {
                if v >= n {
                    return Err(Error::InvalidGraph(format!("neighbour {v} of {u} out of range")));
                }
                if !seen.insert(v) {
                    continue;
                }
                let k = mult(u, v);
                if mult(v, u) != k {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency not symmetric between {u} and {v}"
                    )));
                }
                if u < v {
                    edges.extend(std::iter::repeat_n((u, v), k));
                } else if u == v && k > 0 {
                    return Err(Error::InvalidGraph(format!("loop at {u}")));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn to_adjacency(&self) -> AdjacencyDoc {
        let mut adjacency = vec![Vec::<(usize, usize)>::new(); self.n];
        for &(u, v) in &self.edges {
            for (a, b) in [(u, v), (v, u)] {
                match adjacency[a].iter_mut().find(|(w, _)| *w == b) {
                    Some(entry) => entry.1 += 1,
                    None => adjacency[a].push((b, 1)),
                }
            }
        }
        adjacency.iter_mut().for_each(|row| row.sort_unstable());
        AdjacencyDoc { adjacency }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges).expect("valid complete graph")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::new(n, edges).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|u| (u - 1, u)).collect();
        Self::new(n, edges).expect("valid path")
    }

    /// `rows × cols` grid; vertex `(r, c)` has id `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(rows * cols, edges).expect("valid grid")
    }

    /// Vertices of the outer frame of a `rows × cols` grid.
    pub fn grid_boundary(rows: usize, cols: usize) -> Vec<usize> {
        (0..rows * cols)
            .filter(|v| {
                let (r, c) = (v / cols, v % cols);
                r == 0 || c == 0 || r + 1 == rows || c + 1 == cols
            })
            .collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// `(edge id, neighbour)` for every edge at `v`, parallel edges repeated.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(_, w) in &self.incident[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Identifies `boundary` to a single vertex. Remaining vertices keep their
    /// relative order; the wired vertex is last. Edges inside the boundary become
    /// loops and are dropped; parallel edges are kept.
    pub fn wire_boundary(&self, boundary: &[usize]) -> Result<WiredGraph> {
        let set: HashSet<usize> = boundary.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::InvalidArgument("boundary is empty".into()));
        }
        if let Some(v) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidArgument(format!("boundary vertex {v} out of range")));
        }
        if set.len() == self.n {
            return Err(Error::InvalidArgument("boundary contains every vertex".into()));
        }
        let mut map = vec![0; self.n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !set.contains(&v) {
                *slot = next;
                next += 1;
            }
        }
        let wired = next;
        for &v in &set {
            map[v] = wired;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (map[u], map[v]))
            .filter(|(u, v)| u != v)
            .collect();
        Ok(WiredGraph {
            graph: Self::new(wired + 1, edges)?,
            map,
            wired,
        })
    }
}

/// Result of [`FiniteMultigraph::wire_boundary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredGraph {
    pub graph: FiniteMultigraph,
    /// Old vertex id to new vertex id.
    pub map: Vec<usize>,
    pub wired: usize,
}
