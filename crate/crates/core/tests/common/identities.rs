//! Structural identities between densities, joins and the limit constants,
//! each reported as the absolute gap between its two sides.

use graphonlab::density::{
    conditional_density, hom_density, one_point_densities, regularity, two_point_graphon,
};
use graphonlab::graphs::{automorphism_count, copy_set, strong_edge_join, vertex_join, weak_edge_join};
use graphonlab::limits::{sigma_squared, tau_squared, tau_squared_via_conditional};
use graphonlab::spectral::dwh;
use graphonlab::{Graphon, LabeledGraph};

pub struct Gap {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl Gap {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, lhs, rhs }
    }

    pub fn error(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

fn t(f: &LabeledGraph, w: &Graphon) -> f64 {
    hom_density(f, w).unwrap()
}

fn copies(h: &LabeledGraph) -> Vec<LabeledGraph> {
    let support: Vec<usize> = (1..=h.vertex_count()).collect();
    copy_set(h, &support).unwrap().to_graphs().unwrap()
}

fn oriented_pairs(v: usize) -> Vec<(usize, usize)> {
    (1..=v)
        .flat_map(|a| (1..=v).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

/// `t̲`: the weak or strong join density, zero when either pair is not an edge.
fn underlined(
    h1: &LabeledGraph,
    e1: (usize, usize),
    h2: &LabeledGraph,
    e2: (usize, usize),
    w: &Graphon,
    strong: bool,
) -> f64 {
    if !h1.has_edge(e1.0, e1.1) || !h2.has_edge(e2.0, e2.1) {
        return 0.0;
    }
    if strong {
        hom_density(&strong_edge_join(h1, e1, h2, e2).unwrap(), w).unwrap()
    } else {
        t(&weak_edge_join(h1, e1, h2, e2).unwrap(), w)
    }
}

/// `|G_H|² Σ_{a,b} t(H ⊕_{a,b} H) = v² Σ_{H1,H2 ∈ G_H} t(H1 ⊕_{1,1} H2)`.
pub fn vertex_join_over_copies(h: &LabeledGraph, w: &Graphon) -> Gap {
    let v = h.vertex_count();
    let g = copies(h);
    let mut lhs = 0.0;
    for a in 1..=v {
        for b in 1..=v {
            lhs += t(&vertex_join(h, a, h, b).unwrap(), w);
        }
    }
    lhs *= (g.len() * g.len()) as f64;
    let mut rhs = 0.0;
    for h1 in &g {
        for h2 in &g {
            rhs += t(&vertex_join(h1, 1, h2, 1).unwrap(), w);
        }
    }
    Gap::new("vertex join over copies", lhs, (v * v) as f64 * rhs)
}

/// Edge-join analogue over ordered pairs: summing the relabeled joins over
/// all copies equals `|G_H|²` times the sum over the pattern itself.
pub fn edge_join_over_copies(h: &LabeledGraph, w: &Graphon, strong: bool) -> Gap {
    let pairs = oriented_pairs(h.vertex_count());
    let g = copies(h);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for &e1 in &pairs {
        for &e2 in &pairs {
            for h1 in &g {
                for h2 in &g {
                    lhs += underlined(h1, e1, h2, e2, w, strong);
                }
            }
            rhs += underlined(h, e1, h, e2, w, strong);
        }
    }
    let name = if strong {
        "strong edge join over copies"
    } else {
        "weak edge join over copies"
    };
    Gap::new(name, lhs, (g.len() * g.len()) as f64 * rhs)
}

/// Same sums restricted to pairs `a < b`, `c < d`.
pub fn edge_join_over_copies_increasing(h: &LabeledGraph, w: &Graphon) -> Gap {
    let pairs: Vec<_> = oriented_pairs(h.vertex_count())
        .into_iter()
        .filter(|(a, b)| a < b)
        .collect();
    let g = copies(h);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for &e1 in &pairs {
        for &e2 in &pairs {
            for h1 in &g {
                for h2 in &g {
                    lhs += underlined(h1, e1, h2, e2, w, false);
                }
            }
            rhs += underlined(h, e1, h, e2, w, false);
        }
    }
    Gap::new(
        "weak edge join, increasing pairs only",
        lhs,
        (g.len() * g.len()) as f64 * rhs,
    )
}

/// `∫ t_{(a,b)}(x,y) dy = t_a(x)` and `∫ t_a = t(H)`.
pub fn marginalization(h: &LabeledGraph, w: &Graphon) -> Gap {
    let v = h.vertex_count();
    let pi = w.weights();
    let one = one_point_densities(h, w).unwrap();
    let total = t(h, w);
    let mut worst: f64 = 0.0;
    for a in 1..=v {
        let ta = &one[a - 1];
        let integral: f64 = ta.iter().zip(pi).map(|(x, p)| x * p).sum();
        worst = worst.max((integral - total).abs());
        for b in (1..=v).filter(|&b| b != a) {
            let tab = conditional_density(h, &[a, b], w).unwrap();
            assert!((tab.marginalize(pi) - total).abs() < 1e-12);
            for x in 0..w.blocks() {
                let m: f64 = (0..w.blocks()).map(|y| pi[y] * tab.value(&[x, y])).sum();
                worst = worst.max((m - ta[x]).abs());
            }
        }
    }
    Gap::new("marginalization", worst, 0.0)
}

pub fn tau_squared_forms(h: &LabeledGraph, w: &Graphon) -> Gap {
    Gap::new(
        "tau2 by joins vs conditional densities",
        tau_squared(h, w).unwrap(),
        tau_squared_via_conditional(h, w).unwrap(),
    )
}

/// `∫ t_a(x) t_b(x) dx = t(H ⊕_{a,b} H)`.
pub fn vertex_join_consistency(h: &LabeledGraph, w: &Graphon) -> Gap {
    let one = one_point_densities(h, w).unwrap();
    let pi = w.weights();
    let mut worst: f64 = 0.0;
    for a in 1..=h.vertex_count() {
        for b in 1..=h.vertex_count() {
            let lhs: f64 = (0..w.blocks())
                .map(|x| pi[x] * one[a - 1][x] * one[b - 1][x])
                .sum();
            worst = worst.max((lhs - t(&vertex_join(h, a, h, b).unwrap(), w)).abs());
        }
    }
    Gap::new("vertex join consistency", worst, 0.0)
}

/// `d_{W_H}(x) = (v−1)/(2|Aut|) Σ_a t_a(x)` and `∫ d_{W_H} = d_{W_H}`.
pub fn two_point_degree(h: &LabeledGraph, w: &Graphon) -> Gap {
    let v = h.vertex_count();
    let aut = automorphism_count(h).unwrap() as f64;
    let wh = two_point_graphon(h, w).unwrap();
    let one = one_point_densities(h, w).unwrap();
    let deg = wh.degree();
    let mut worst: f64 = 0.0;
    for x in 0..w.blocks() {
        let expected = (v - 1) as f64 / (2.0 * aut) * one.iter().map(|ta| ta[x]).sum::<f64>();
        worst = worst.max((deg[x] - expected).abs());
    }
    let mean: f64 = deg.iter().zip(w.weights()).map(|(d, p)| d * p).sum();
    worst = worst.max((mean - dwh(h, w).unwrap()).abs());
    Gap::new("two-point graphon degree", worst, 0.0)
}

/// `σ² = (2 (v−2)!²)^{-1} Σ_{H1,H2 ∋ {1,2}} [t(H1 ⊖ H2) − t(H1 ⊖̄ H2)]`,
/// both joins along `(1,2) ~ (1,2)`.
pub fn sigma_squared_over_copies(h: &LabeledGraph, w: &Graphon) -> Gap {
    let v = h.vertex_count();
    let all: Vec<usize> = (1..=v).collect();
    let containing: Vec<LabeledGraph> = copy_set(h, &all)
        .unwrap()
        .to_graphs()
        .unwrap()
        .into_iter()
        .filter(|c| c.has_edge(1, 2))
        .collect();
    let mut acc = 0.0;
    for h1 in &containing {
        for h2 in &containing {
            acc += underlined(h1, (1, 2), h2, (1, 2), w, false) - underlined(h1, (1, 2), h2, (1, 2), w, true);
        }
    }
    let f: f64 = (1..=v.saturating_sub(2)).map(|i| i as f64).product();
    Gap::new(
        "sigma2 over copies containing {1,2}",
        sigma_squared(h, w).unwrap(),
        acc / (2.0 * f * f),
    )
}

/// `τ² = 0` exactly when `W` is H-regular; `W_H` then has constant degree.
pub fn regularity_dichotomy(h: &LabeledGraph, w: &Graphon, tol: f64) -> bool {
    let reg = regularity(h, w, tol).unwrap();
    let tau2 = tau_squared(h, w).unwrap();
    let deg = two_point_graphon(h, w).unwrap().degree();
    let spread = deg.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - deg.iter().cloned().fold(f64::INFINITY, f64::min);
    if reg.regular {
        tau2 <= tol && spread <= tol
    } else {
        tau2 > 0.0 && spread > tol
    }
}

/// Every identity that must hold for all `H` and `W`.
pub fn all(h: &LabeledGraph, w: &Graphon) -> Vec<Gap> {
    vec![
        vertex_join_over_copies(h, w),
        edge_join_over_copies(h, w, false),
        edge_join_over_copies(h, w, true),
        marginalization(h, w),
        tau_squared_forms(h, w),
        vertex_join_consistency(h, w),
        two_point_degree(h, w),
        sigma_squared_over_copies(h, w),
    ]
}
