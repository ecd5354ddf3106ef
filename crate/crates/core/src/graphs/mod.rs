//! Finite pattern graphs and sampled host graphs.
//!
//! Vertices are labeled `1..=n`. Edges are stored as ordered pairs `(a, b)`
//! with `a < b`, sorted lexicographically.

mod automorphism;
mod count;
mod join;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use automorphism::{automorphism_count, copy_set, CopySet, MAX_AUTOMORPHISM_VERTICES};
pub use count::{count_copies, MAX_COUNT_PATTERN_VERTICES};
pub use join::{strong_edge_join, vertex_join, weak_edge_join};

/// A simple undirected graph on `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// An undirected loopless multigraph on `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

fn normalize(n: usize, a: usize, b: usize) -> Result<(usize, usize)> {
    for v in [a, b] {
        if v == 0 || v > n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: n,
            });
        }
    }
    if a == b {
        return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
    }
    Ok((a.min(b), a.max(b)))
}

impl LabeledGraph {
    /// Builds a graph, accepting either orientation of each pair.
    /// Rejects self-loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex_count must be positive".into()));
        }
        let mut out = Vec::new();
        for (a, b) in edges {
            out.push(normalize(n, a, b)?);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self { n, edges: out })
    }

    /// Caller guarantees sorted, distinct, in-range pairs with `a < b`.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(a, b)| 1 <= a && a < b && b <= n));
        Self { n, edges }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// `K_r`.
    pub fn complete(r: usize) -> Self {
        let edges = (1..=r).flat_map(|a| (a + 1..=r).map(move |b| (a, b))).collect();
        Self::from_sorted_unchecked(r.max(1), edges)
    }

    /// `K_{1,k}` with center 1 and leaves `2..=k+1`.
    pub fn star(k: usize) -> Self {
        Self::from_sorted_unchecked(k + 1, (2..=k + 1).map(|b| (1, b)).collect())
    }

    /// Path with `len` edges on `len + 1` vertices, `1 - 2 - ... - (len+1)`.
    pub fn path(len: usize) -> Self {
        Self::from_sorted_unchecked(len + 1, (1..=len).map(|a| (a, a + 1)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    /// Degree of each vertex, indexed `0..n` for vertex `1..=n`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a - 1] += 1;
            deg[b - 1] += 1;
        }
        deg
    }

    pub fn sorted_degrees(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }

    /// Adjacency as one bitmask per vertex (bit `j` set when `i+1 ~ j+1`).
    /// Only valid for `n ≤ 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        let mut adj = vec![0u64; self.n];
        for &(a, b) in &self.edges {
            adj[a - 1] |= 1 << (b - 1);
            adj[b - 1] |= 1 << (a - 1);
        }
        adj
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.n,
            })
        } else {
            Ok(())
        }
    }
}

impl MultiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = ((usize, usize), u32)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex_count must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for ((a, b), m) in edges {
            if m == 0 {
                return Err(Error::InvalidGraph(format!("zero multiplicity on ({a},{b})")));
            }
            let key = normalize(n, a, b)?;
            if map.insert(key, m).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
        }
        Ok(Self { n, edges: map })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// Total edge count, counting multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.edges.values().sum()
    }

    /// Underlying simple graph (every multiplicity clamped to 1).
    pub fn simplify(&self) -> LabeledGraph {
        LabeledGraph::from_sorted_unchecked(self.n, self.edges.keys().copied().collect())
    }
}

impl From<&LabeledGraph> for MultiGraph {
    fn from(g: &LabeledGraph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|&e| (e, 1)).collect(),
        }
    }
}

/// Anything whose homomorphism density can be taken: a vertex count plus
/// edges with multiplicities.
pub trait Pattern {
    fn vertex_count(&self) -> usize;
    fn weighted_edges(&self) -> Vec<((usize, usize), u32)>;
}

impl Pattern for LabeledGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn weighted_edges(&self) -> Vec<((usize, usize), u32)> {
        self.edges.iter().map(|&e| (e, 1)).collect()
    }
}

impl Pattern for MultiGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn weighted_edges(&self) -> Vec<((usize, usize), u32)> {
        self.edges().collect()
    }
}

/// On-disk graph format: `{"n": 3, "edges": [[1,2],[1,3]]}` with an
/// optional parallel `"mult"` array for multigraphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<u32>>,
}

impl GraphJson {
    pub fn is_multigraph(&self) -> bool {
        self.mult.as_ref().is_some_and(|m| m.iter().any(|&k| k != 1))
    }

    pub fn to_multigraph(&self) -> Result<MultiGraph> {
        let mult = match &self.mult {
            Some(m) if m.len() != self.edges.len() => {
                return Err(Error::SizeMismatch {
                    expected: self.edges.len(),
                    actual: m.len(),
                })
            }
            Some(m) => m.clone(),
            None => vec![1; self.edges.len()],
        };
        MultiGraph::new(
            self.n,
            self.edges.iter().zip(mult).map(|(e, m)| ((e[0], e[1]), m)),
        )
    }

    pub fn to_graph(&self) -> Result<LabeledGraph> {
        if self.is_multigraph() {
            return Err(Error::InvalidGraph(
                "expected a simple graph, found multiplicities".into(),
            ));
        }
        LabeledGraph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            mult: None,
        }
    }
}

impl From<&MultiGraph> for GraphJson {
    fn from(g: &MultiGraph) -> Self {
        let (edges, mult) = g.edges().map(|((a, b), m)| ([a, b], m)).unzip();
        Self {
            n: g.n,
            edges,
            mult: Some(mult),
        }
    }
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GraphJson::deserialize(d)?
            .to_graph()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for MultiGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GraphJson::deserialize(d)?
            .to_multigraph()
            .map_err(serde::de::Error::custom)
    }
}
