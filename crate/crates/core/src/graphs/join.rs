//! Gluing two patterns along a vertex or an edge.
//!
//! Outputs are relabeled canonically: `h1` keeps its labels `1..=v1`, and
//! the vertices of `h2` that are not identified follow as `v1+1, v1+2, ...`
//! in increasing order of their `h2` label.

use std::collections::BTreeMap;

use super::{LabeledGraph, MultiGraph};
use crate::error::{Error, Result};

/// Relabeling of `h2` into the joined graph given the identified vertices.
fn relabel_second(h1: &LabeledGraph, h2: &LabeledGraph, glued: &[(usize, usize)]) -> Vec<usize> {
    let mut map = vec![0; h2.vertex_count() + 1];
    for &(in_h2, in_h1) in glued {
        map[in_h2] = in_h1;
    }
    let mut next = h1.vertex_count();
    for slot in map.iter_mut().skip(1) {
        if *slot == 0 {
            next += 1;
            *slot = next;
        }
    }
    map
}

/// Vertex count and edge multiplicities of a glued graph.
type Glued = (usize, BTreeMap<(usize, usize), u32>);

fn glue(h1: &LabeledGraph, h2: &LabeledGraph, glued: &[(usize, usize)]) -> Glued {
    let map = relabel_second(h1, h2, glued);
    let n = h1.vertex_count() + h2.vertex_count() - glued.len();
    let mut edges = BTreeMap::new();
    for &e in h1.edges() {
        *edges.entry(e).or_insert(0) += 1;
    }
    for &(a, b) in h2.edges() {
        let (x, y) = (map[a], map[b]);
        *edges.entry((x.min(y), x.max(y))).or_insert(0) += 1;
    }
    (n, edges)
}

/// `H1 ⊕_{a,b} H2`: identify vertex `a` of `h1` with vertex `b` of `h2`.
pub fn vertex_join(h1: &LabeledGraph, a: usize, h2: &LabeledGraph, b: usize) -> Result<LabeledGraph> {
    h1.check_vertex(a)?;
    h2.check_vertex(b)?;
    let (n, edges) = glue(h1, h2, &[(b, a)]);
    // only one vertex is shared, so no edge can be duplicated
    Ok(LabeledGraph::from_sorted_unchecked(
        n,
        edges.into_keys().collect(),
    ))
}

fn check_edge(h: &LabeledGraph, (a, b): (usize, usize)) -> Result<()> {
    h.check_vertex(a)?;
    h.check_vertex(b)?;
    if h.has_edge(a, b) {
        Ok(())
    } else {
        Err(Error::NotAnEdge(a, b))
    }
}

fn edge_glue(h1: &LabeledGraph, e1: (usize, usize), h2: &LabeledGraph, e2: (usize, usize)) -> Result<Glued> {
    check_edge(h1, e1)?;
    check_edge(h2, e2)?;
    Ok(glue(h1, h2, &[(e2.0, e1.0), (e2.1, e1.1)]))
}

/// Weak edge join: identify `e1.0 ~ e2.0` and `e1.1 ~ e2.1`, keeping one
/// copy of the shared edge. Both pairs must be edges (either orientation).
pub fn weak_edge_join(
    h1: &LabeledGraph,
    e1: (usize, usize),
    h2: &LabeledGraph,
    e2: (usize, usize),
) -> Result<LabeledGraph> {
    let (n, edges) = edge_glue(h1, e1, h2, e2)?;
    Ok(LabeledGraph::from_sorted_unchecked(
        n,
        edges.into_keys().collect(),
    ))
}

/// Strong edge join: as [`weak_edge_join`] but the shared edge keeps
/// multiplicity 2.
pub fn strong_edge_join(
    h1: &LabeledGraph,
    e1: (usize, usize),
    h2: &LabeledGraph,
    e2: (usize, usize),
) -> Result<MultiGraph> {
    let (n, edges) = edge_glue(h1, e1, h2, e2)?;
    MultiGraph::new(n, edges)
}
