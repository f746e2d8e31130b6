use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::FiniteMultigraph;

pub const MAX_ENUMERATION_VERTICES: usize = 8;

/// All spanning trees as sorted edge-id lists, in lexicographic order.
pub fn enumerate_spanning_trees(graph: &FiniteMultigraph) -> Result<Vec<Vec<usize>>> {
    let n = graph.num_vertices();
    if n > MAX_ENUMERATION_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "enumeration limited to {MAX_ENUMERATION_VERTICES} vertices, graph has {n}"
        )));
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let comp: Vec<usize> = (0..n).collect();
    extend(graph, 0, &comp, &mut chosen, &mut out);
    Ok(out)
}

fn extend(
    graph: &FiniteMultigraph,
    from: usize,
    comp: &[usize],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = graph.num_vertices();
    if chosen.len() + 1 == n || n == 1 {
        out.push(chosen.clone());
        return;
    }
    let remaining = n - 1 - chosen.len();
    let m = graph.num_edges();
    for e in from..m {
        if m - e < remaining {
            break;
        }
        let (u, v) = graph.edge(e);
        let (cu, cv) = (comp[u], comp[v]);
        if cu == cv {
            continue;
        }
        let merged: Vec<usize> = comp.iter().map(|&c| if c == cv { cu } else { c }).collect();
        chosen.push(e);
        extend(graph, e + 1, &merged, chosen, out);
        chosen.pop();
    }
}

/// Number of spanning trees from the determinant of a reduced Laplacian.
pub fn matrix_tree_count(graph: &FiniteMultigraph) -> f64 {
    let n = graph.num_vertices();
    if n == 1 {
        return 1.0;
    }
    let mut lap = DMatrix::<f64>::zeros(n - 1, n - 1);
    for &(u, v) in graph.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if a + 1 < n {
                lap[(a, a)] += 1.0;
                if b + 1 < n {
                    lap[(a, b)] -= 1.0;
                }
            }
        }
    }
    lap.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_counts() {
        for n in 2..=6 {
            let g = FiniteMultigraph::complete(n);
            let trees = enumerate_spanning_trees(&g).unwrap();
            let cayley = (n as f64).powi(n as i32 - 2);
            assert_eq!(trees.len() as f64, cayley);
            assert!((matrix_tree_count(&g) - cayley).abs() < 1e-8);
        }
    }

    #[test]
    fn multigraph_and_cycle_counts() {
        let g = FiniteMultigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(enumerate_spanning_trees(&g).unwrap().len(), 5);
        assert!((matrix_tree_count(&g) - 5.0).abs() < 1e-9);
        let c = FiniteMultigraph::cycle(7);
        assert_eq!(enumerate_spanning_trees(&c).unwrap().len(), 7);
        assert!(enumerate_spanning_trees(&FiniteMultigraph::path(9)).is_err());
    }
}
