//! Limit constants for subgraph counts in W-random graphs and the two
//! limiting laws.
//!
//! For a graphon that is not H-regular the centered count, scaled by
//! `n^{v−1/2}`, is asymptotically `N(0, τ²)`. For an H-regular graphon the
//! scale is `n^{v−1}` and the limit is `σZ + Σ_λ λ(Z_λ² − 1)` over `Spec⁻(W_H)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{hom_density, one_point_densities, regularity, two_point_graphon};
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{automorphism_count, strong_edge_join, vertex_join, weak_edge_join, LabeledGraph};
use crate::scalar::{Real, Scalar};
use crate::spectral::{dwh, spec_minus, spectrum};

/// Variances in `(−VARIANCE_CLAMP, 0)` are rounding noise and become 0.
pub const VARIANCE_CLAMP: f64 = 1e-10;

fn clamp_variance<T: Scalar>(x: T) -> Result<T> {
    if x >= T::zero() {
        Ok(x)
    } else if x.to_f64_lossy() > -VARIANCE_CLAMP {
        Ok(T::zero())
    } else {
        Err(Error::NegativeVariance(x.to_f64_lossy()))
    }
}

fn aut_squared<T: Scalar>(h: &LabeledGraph) -> Result<T> {
    let aut = T::from_count(automorphism_count(h)? as usize);
    Ok(aut.clone() * aut)
}

/// `τ² = |Aut(H)|^{-2} [Σ_{a,b} t(H ⊕_{a,b} H, W) − v² t(H,W)²]`.
pub fn tau_squared<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<T> {
    let v = h.vertex_count();
    let t = hom_density(h, w)?;
    let mut joined = T::zero();
    for a in 1..=v {
        for b in 1..=v {
            joined = joined + hom_density(&vertex_join(h, a, h, b)?, w)?;
        }
    }
    let v2 = T::from_count(v * v);
    clamp_variance((joined - v2 * t.clone() * t) / aut_squared(h)?)
}

/// `τ²` through one-point conditional densities:
/// `|Aut(H)|^{-2} [∫ (Σ_a t_a(x,H,W))² dx − v² t(H,W)²]`.
pub fn tau_squared_via_conditional<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<T> {
    let v = h.vertex_count();
    let t = hom_density(h, w)?;
    let per_vertex = one_point_densities(h, w)?;
    let mut second = T::zero();
    for (x, pi) in w.weights().iter().enumerate() {
        let s = per_vertex.iter().fold(T::zero(), |acc, ta| acc + ta[x].clone());
        second = second + pi.clone() * s.clone() * s;
    }
    let v2 = T::from_count(v * v);
    clamp_variance((second - v2 * t.clone() * t) / aut_squared(h)?)
}

/// `σ²` from weak and strong edge joins.
///
/// Each ordered pair of edges `(e1, e2)` is glued both ways (`e1.0 ~ e2.0`
/// and `e1.0 ~ e2.1`) and the two joins are averaged:
/// `σ² = |Aut(H)|^{-2} Σ_{e1,e2} Σ_{both gluings} [t(weak) − t(strong)]`.
/// For cliques, and for any pattern whose two gluings give equal sums, this
/// is `2|Aut(H)|^{-2} Σ_{e1,e2} [t(H ⊖ H) − t(H ⊕ H)]`.
pub fn sigma_squared<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<T> {
    let mut acc = T::zero();
    for &e1 in h.edges() {
        for &(c, d) in h.edges() {
            for e2 in [(c, d), (d, c)] {
                let weak = hom_density(&weak_edge_join(h, e1, h, e2)?, w)?;
                let strong = hom_density(&strong_edge_join(h, e1, h, e2)?, w)?;
                acc = acc + weak - strong;
            }
        }
    }
    clamp_variance(acc / aut_squared(h)?)
}

/// Limiting law of the centered count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    /// `N(0, τ²)` at scale `n^{v−1/2}`.
    Gaussian { tau2: f64, scale_exponent: f64 },
    /// `σZ + Σ λ(Z_λ² − 1)` at scale `n^{v−1}`.
    Mixture {
        sigma2: f64,
        lambdas: Vec<f64>,
        scale_exponent: f64,
    },
}

impl LimitLaw {
    pub fn scale_exponent(&self) -> f64 {
        match self {
            LimitLaw::Gaussian { scale_exponent, .. } | LimitLaw::Mixture { scale_exponent, .. } => {
                *scale_exponent
            }
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            LimitLaw::Gaussian { tau2, .. } => *tau2,
            LimitLaw::Mixture { sigma2, lambdas, .. } => {
                sigma2 + 2.0 * lambdas.iter().map(|l| l * l).sum::<f64>()
            }
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, LimitLaw::Gaussian { .. })
    }

    fn draw<R: rand::Rng>(&self, rng: &mut R) -> f64 {
        let mut z = || -> f64 { StandardNormal.sample(rng) };
        match self {
            LimitLaw::Gaussian { tau2, .. } => tau2.sqrt() * z(),
            LimitLaw::Mixture { sigma2, lambdas, .. } => {
                let mut x = sigma2.sqrt() * z();
                for l in lambdas {
                    let g = z();
                    x += l * (g * g - 1.0);
                }
                x
            }
        }
    }
}

/// Every constant entering the limit theorem for one `(H, W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitConstants<T> {
    pub density: T,
    pub regularity_defect: T,
    pub regular: bool,
    pub tau2: T,
    pub sigma2: T,
    pub dwh: T,
    /// Nonzero spectrum of `W_H`.
    pub spectrum: Vec<T>,
    /// `Spec⁻(W_H)`, present only when `W` is H-regular.
    pub spec_minus: Option<Vec<T>>,
}

pub fn limit_constants<T: Real>(
    h: &LabeledGraph,
    w: &StepGraphon<T>,
    regularity_tolerance: f64,
) -> Result<LimitConstants<T>> {
    let reg = regularity(h, w, regularity_tolerance)?;
    let wh = two_point_graphon(h, w)?;
    let spec = spectrum(&wh)?;
    let d = dwh(h, w)?;
    let spec_minus = if reg.regular {
        Some(spec_minus(&spec, d)?)
    } else {
        None
    };
    Ok(LimitConstants {
        density: reg.density,
        regularity_defect: reg.defect,
        regular: reg.regular,
        tau2: tau_squared(h, w)?,
        sigma2: sigma_squared(h, w)?,
        dwh: d,
        spectrum: spec.eigenvalues().to_vec(),
        spec_minus,
    })
}

/// Picks the branch of the limit theorem: Gaussian when the regularity
/// defect exceeds `regularity_tolerance`, chi-square mixture otherwise.
pub fn limit_law<T: Real>(
    h: &LabeledGraph,
    w: &StepGraphon<T>,
    regularity_tolerance: f64,
) -> Result<LimitLaw> {
    let v = h.vertex_count() as f64;
    let reg = regularity(h, w, regularity_tolerance)?;
    if !reg.regular {
        return Ok(LimitLaw::Gaussian {
            tau2: tau_squared(h, w)?.to_f64_lossy(),
            scale_exponent: v - 0.5,
        });
    }
    let spec = spectrum(&two_point_graphon(h, w)?)?;
    let lambdas = spec_minus(&spec, dwh(h, w)?)?;
    Ok(LimitLaw::Mixture {
        sigma2: sigma_squared(h, w)?.to_f64_lossy(),
        lambdas: lambdas.iter().map(Scalar::to_f64_lossy).collect(),
        scale_exponent: v - 1.0,
    })
}

const DRAW_CHUNK: usize = 4096;

/// `count` independent draws from `law`. Draw `i` comes from ChaCha stream
/// `i / 4096` of `seed`, so the output does not depend on thread count.
pub fn sample_limit(law: &LimitLaw, seed: u64, count: usize) -> Vec<f64> {
    let chunks = count.div_ceil(DRAW_CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = DRAW_CHUNK.min(count - c * DRAW_CHUNK);
            (0..len).map(|_| law.draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}
