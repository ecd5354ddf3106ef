use std::collections::BTreeSet;

use super::LabeledGraph;
use crate::error::{Error, Result};

/// Largest pattern for which automorphisms are enumerated.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// Largest pattern for which copy sets are materialized.
const MAX_COPY_SET_VERTICES: usize = 8;

struct Search<'a> {
    adj: Vec<u64>,
    deg: Vec<usize>,
    preserve: bool,
    perm: Vec<usize>,
    used: u64,
    visit: &'a mut dyn FnMut(&[usize]),
}

impl Search<'_> {
    fn extend(&mut self, i: usize) {
        let n = self.perm.len();
        if i == n {
            (self.visit)(&self.perm);
            return;
        }
        for img in 0..n {
            if self.used & (1 << img) != 0 {
                continue;
            }
            if self.preserve {
                if self.deg[img] != self.deg[i] {
                    continue;
                }
                let consistent = (0..i).all(|j| {
                    let edge = self.adj[i] & (1 << j) != 0;
                    let mapped = self.adj[img] & (1 << self.perm[j]) != 0;
                    edge == mapped
                });
                if !consistent {
                    continue;
                }
            }
            self.perm[i] = img;
            self.used |= 1 << img;
            self.extend(i + 1);
            self.used &= !(1 << img);
        }
    }
}

/// Calls `visit` with vertex permutations of `h` (0-based, `perm[i]` is the
/// image of vertex `i`). With `preserve = true` only automorphisms are
/// visited, otherwise every permutation.
fn for_each_permutation(h: &LabeledGraph, preserve: bool, mut visit: impl FnMut(&[usize])) {
    let mut search = Search {
        adj: h.adjacency_masks(),
        deg: h.degrees(),
        preserve,
        perm: vec![usize::MAX; h.vertex_count()],
        used: 0,
        visit: &mut visit,
    };
    search.extend(0);
}

/// `|Aut(H)|` by exhaustive search over vertex permutations, pruned on
/// degree and partial adjacency consistency.
pub fn automorphism_count(h: &LabeledGraph) -> Result<u64> {
    if h.vertex_count() > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::PatternTooLarge(format!(
            "automorphism search supports at most {MAX_AUTOMORPHISM_VERTICES} vertices, got {}",
            h.vertex_count()
        )));
    }
    let mut count = 0u64;
    for_each_permutation(h, true, |_| count += 1);
    Ok(count)
}

/// All distinct copies of a pattern on a fixed vertex set: the subgraphs of
/// the complete graph on `support` that are isomorphic to the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopySet {
    support: Vec<usize>,
    copies: Vec<Vec<(usize, usize)>>,
}

impl CopySet {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Edge sets, each sorted with `a < b`, in lexicographic order.
    pub fn copies(&self) -> &[Vec<(usize, usize)>] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// The copies as graphs, when the support is exactly `1..=v`.
    pub fn to_graphs(&self) -> Result<Vec<LabeledGraph>> {
        let v = self.support.len();
        if self.support.iter().copied().ne(1..=v) {
            return Err(Error::InvalidArgument("copy set support is not 1..=v".into()));
        }
        Ok(self
            .copies
            .iter()
            .map(|c| LabeledGraph::from_sorted_unchecked(v, c.clone()))
            .collect())
    }
}

/// `𝒢_H(S)`: every edge set on `support` isomorphic to `h`. Its size is
/// `|V(H)|! / |Aut(H)|`.
pub fn copy_set(h: &LabeledGraph, support: &[usize]) -> Result<CopySet> {
    let v = h.vertex_count();
    if support.len() != v {
        return Err(Error::SizeMismatch {
            expected: v,
            actual: support.len(),
        });
    }
    if v > MAX_COPY_SET_VERTICES {
        return Err(Error::PatternTooLarge(format!(
            "copy sets support at most {MAX_COPY_SET_VERTICES} vertices, got {v}"
        )));
    }
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("support vertices must be distinct".into()));
    }
    let mut seen = BTreeSet::new();
    for_each_permutation(h, false, |perm| {
        let mut edges: Vec<(usize, usize)> = h
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (sorted[perm[a - 1]], sorted[perm[b - 1]]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        seen.insert(edges);
    });
    Ok(CopySet {
        support: sorted,
        copies: seen.into_iter().collect(),
    })
}
