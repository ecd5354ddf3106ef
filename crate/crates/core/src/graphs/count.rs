//! Counting copies of a small pattern in a host graph.
//!
//! Injective homomorphisms are enumerated by backtracking over the pattern
//! vertices; candidate sets are bitsets over host vertices, intersected with
//! the neighborhoods of already-placed pattern neighbors and with the set of
//! host vertices of sufficient degree. The last pattern vertex is counted by
//! popcount instead of enumerated.

use super::{automorphism_count, LabeledGraph};
use crate::error::{Error, Result};

pub const MAX_COUNT_PATTERN_VERTICES: usize = 8;

struct Bitsets {
    words: usize,
    data: Vec<u64>,
}

impl Bitsets {
    fn new(rows: usize, bits: usize) -> Self {
        let words = bits.div_ceil(64);
        Self {
            words,
            data: vec![0; rows * words],
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn set(&mut self, r: usize, bit: usize) {
        self.data[r * self.words + bit / 64] |= 1 << (bit % 64);
    }
}

/// Placement order: greedily take the vertex with the most already-placed
/// neighbors, breaking ties by degree and then label.
fn placement_order(h: &LabeledGraph) -> Vec<usize> {
    let v = h.vertex_count();
    let adj = h.adjacency_masks();
    let deg = h.degrees();
    let mut order = Vec::with_capacity(v);
    let mut placed = 0u64;
    while order.len() < v {
        let next = (0..v)
            .filter(|&i| placed & (1 << i) == 0)
            .max_by_key(|&i| ((adj[i] & placed).count_ones(), deg[i], std::cmp::Reverse(i)))
            .expect("unplaced vertex");
        placed |= 1 << next;
        order.push(next);
    }
    order
}

struct Search<'a> {
    words: usize,
    host: &'a Bitsets,
    /// `min_degree[d]`: host vertices of degree at least `d`
    min_degree: &'a Bitsets,
    /// per placement step: required pattern degree and earlier steps adjacent to it
    steps: Vec<(usize, Vec<usize>)>,
    all: Vec<u64>,
}

impl Search<'_> {
    fn candidates(&self, step: usize, image: &[usize], used: &[u64], out: &mut [u64]) {
        let (need, ref back) = self.steps[step];
        out.copy_from_slice(self.min_degree.row(need));
        if back.is_empty() {
            for (o, a) in out.iter_mut().zip(&self.all) {
                *o &= a;
            }
        }
        for &j in back {
            for (o, n) in out.iter_mut().zip(self.host.row(image[j])) {
                *o &= n;
            }
        }
        for (o, u) in out.iter_mut().zip(used) {
            *o &= !u;
        }
    }

    fn run(&self, step: usize, image: &mut [usize], used: &mut [u64], scratch: &mut [Vec<u64>]) -> u64 {
        let (cand, rest) = scratch.split_first_mut().expect("scratch per step");
        self.candidates(step, image, used, cand);
        if step + 1 == self.steps.len() {
            return cand.iter().map(|w| w.count_ones() as u64).sum();
        }
        let mut total = 0;
        for w in 0..self.words {
            let mut bits = cand[w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let x = w * 64 + b;
                image[step] = x;
                used[w] |= 1 << b;
                total += self.run(step + 1, image, used, rest);
                used[w] &= !(1 << b);
            }
        }
        total
    }
}

/// Number of subgraphs of `g` isomorphic to `h` (not necessarily induced):
/// injective homomorphisms `h → g` divided by `|Aut(h)|`.
pub fn count_copies(h: &LabeledGraph, g: &LabeledGraph) -> Result<u64> {
    let v = h.vertex_count();
    let n = g.vertex_count();
    if v > MAX_COUNT_PATTERN_VERTICES {
        return Err(Error::PatternTooLarge(format!(
            "counting supports patterns of at most {MAX_COUNT_PATTERN_VERTICES} vertices, got {v}"
        )));
    }
    if v > n {
        return Err(Error::PatternTooLarge(format!(
            "pattern has {v} vertices but host has only {n}"
        )));
    }

    let mut host = Bitsets::new(n, n);
    for &(a, b) in g.edges() {
        host.set(a - 1, b - 1);
        host.set(b - 1, a - 1);
    }
    let host_deg = g.degrees();
    let pattern_deg = h.degrees();
    let max_need = pattern_deg.iter().copied().max().unwrap_or(0);
    let mut min_degree = Bitsets::new(max_need + 1, n);
    for d in 0..=max_need {
        for (x, &dx) in host_deg.iter().enumerate() {
            if dx >= d {
                min_degree.set(d, x);
            }
        }
    }

    let order = placement_order(h);
    let adj = h.adjacency_masks();
    let steps = order
        .iter()
        .enumerate()
        .map(|(s, &p)| {
            let back = (0..s).filter(|&j| adj[p] & (1 << order[j]) != 0).collect();
            (pattern_deg[p], back)
        })
        .collect();
    let mut all = vec![0u64; host.words];
    for x in 0..n {
        all[x / 64] |= 1 << (x % 64);
    }
    let search = Search {
        words: host.words,
        host: &host,
        min_degree: &min_degree,
        steps,
        all,
    };

    let mut image = vec![0; v];
    let mut used = vec![0u64; host.words];
    let mut scratch = vec![vec![0u64; host.words]; v];
    let injective = search.run(0, &mut image, &mut used, &mut scratch);
    let aut = automorphism_count(h)?;
    debug_assert_eq!(injective % aut, 0);
    Ok(injective / aut)
}
