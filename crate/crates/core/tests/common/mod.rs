#![allow(dead_code)]

pub mod identities;

use graphonlab::graphs::{copy_set, MultiGraph, Pattern};
use graphonlab::{Graphon, LabeledGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `k`-block graphon with positive weights and values in `[0,1]`.
pub fn random_graphon(rng: &mut impl Rng, k: usize) -> Graphon {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut pi: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = pi[..k - 1].iter().sum();
    pi[k - 1] = 1.0 - head;
    let mut b = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v: f64 = rng.random_range(0.05..0.95);
            b[i][j] = v;
            b[j][i] = v;
        }
    }
    Graphon::new(pi, b).expect("valid random graphon")
}

/// Degree-regular graphon on `k` equal blocks: `p + ε M` with `M`
/// symmetric and zero row sums.
pub fn degree_regular_graphon(rng: &mut impl Rng, k: usize) -> Graphon {
    let p = rng.random_range(0.3..0.7);
    let mut b = vec![vec![p; k]; k];
    for _ in 0..k {
        let i = rng.random_range(0..k);
        let j = rng.random_range(0..k);
        let (r, s) = ((i + 1) % k, (j + 1) % k);
        if i == r || j == s {
            continue;
        }
        let eps = rng.random_range(0.0..0.03);
        // adding ε on (i,j),(r,s) and −ε on (i,s),(r,j) keeps row and column sums
        for (x, y, sgn) in [(i, j, 1.0), (r, s, 1.0), (i, s, -1.0), (r, j, -1.0)] {
            b[x][y] += sgn * eps;
            b[y][x] += sgn * eps;
        }
    }
    let b: Vec<Vec<f64>> = (0..k)
        .map(|x| (0..k).map(|y| 0.5 * (b[x][y] + b[y][x])).collect())
        .collect();
    Graphon::uniform(b).expect("valid regular graphon")
}

/// Direct sum over every block assignment of the pattern vertices.
pub fn brute_density<P: Pattern>(f: &P, w: &Graphon) -> f64 {
    let v = f.vertex_count();
    let k = w.blocks();
    let edges = f.weighted_edges();
    let mut total = 0.0;
    let mut phi = vec![0usize; v];
    loop {
        let mut term: f64 = phi.iter().map(|&b| w.weights()[b]).product();
        for &((a, b), m) in &edges {
            term *= w.value(phi[a - 1], phi[b - 1]).powi(m as i32);
        }
        total += term;
        let mut pos = 0;
        loop {
            if pos == v {
                return total;
            }
            phi[pos] += 1;
            if phi[pos] < k {
                break;
            }
            phi[pos] = 0;
            pos += 1;
        }
    }
}

/// Counts copies by enumerating every vertex subset of the host and every
/// copy of the pattern on it.
pub fn exhaustive_count(h: &LabeledGraph, g: &LabeledGraph) -> u64 {
    let n = g.vertex_count();
    let v = h.vertex_count();
    let mut total = 0;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != v {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let copies = copy_set(h, &subset).unwrap();
        total += copies
            .copies()
            .iter()
            .filter(|c| c.iter().all(|&(a, b)| g.has_edge(a, b)))
            .count() as u64;
    }
    total
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> LabeledGraph {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::new(n, edges).unwrap()
}

pub fn to_multi(g: &LabeledGraph) -> MultiGraph {
    MultiGraph::from(g)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn patterns() -> Vec<(&'static str, LabeledGraph)> {
    vec![
        ("K2", LabeledGraph::complete(2)),
        ("K12", LabeledGraph::star(2)),
        ("K3", LabeledGraph::complete(3)),
    ]
}
