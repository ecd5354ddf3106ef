//! W-random graphs `G(n, W)` and the normalized subgraph-count statistic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::mean_count;
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{count_copies, LabeledGraph};
use crate::limits::LimitLaw;
use crate::scalar::Real;

/// Draws `U_1..U_n` uniform on `[0,1]` and joins `i < j` when an
/// independent uniform `Y_ij` falls below `W(U_i, U_j)`. Deterministic in
/// `seed`; the latent positions are discarded.
pub fn sample_graph<T: Real>(w: &StepGraphon<T>, n: usize, seed: u64) -> Result<LabeledGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<usize> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            w.block_of(&T::from(u).expect("f64 converts"))
        })
        .collect::<Result<_>>()?;
    let probs: Vec<Vec<f64>> = w
        .values()
        .iter()
        .map(|row| row.iter().map(|v| v.to_f64().expect("finite")).collect())
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        let row = &probs[blocks[i]];
        for j in i + 1..n {
            let y: f64 = rng.random();
            if y < row[blocks[j]] {
                edges.push((i + 1, j + 1));
            }
        }
    }
    Ok(LabeledGraph::from_sorted_unchecked(n, edges))
}

/// One Monte Carlo replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub n: usize,
    pub seed: u64,
    /// `X_n(H, W)`.
    pub raw_count: u64,
    /// `(X_n − E X_n) / n^{scale_exponent}`.
    pub normalized: f64,
}

/// Centers and scales the copy count of `h` in `g` (a sample of `G(n, W)`
/// generated from `seed`) according to `law`.
pub fn normalized_statistic<T: Real>(
    h: &LabeledGraph,
    w: &StepGraphon<T>,
    g: &LabeledGraph,
    law: &LimitLaw,
    seed: u64,
) -> Result<SampleRecord> {
    let n = g.vertex_count();
    if n < h.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is smaller than |V(H)| = {}",
            h.vertex_count()
        )));
    }
    let raw_count = count_copies(h, g)?;
    let mean = mean_count(h, w, n)?.to_f64().expect("finite");
    let normalized = (raw_count as f64 - mean) / (n as f64).powf(law.scale_exponent());
    Ok(SampleRecord {
        n,
        seed,
        raw_count,
        normalized,
    })
}

/// Samples `G(n, W)` from `seed` and computes its normalized statistic.
pub fn replicate<T: Real>(
    h: &LabeledGraph,
    w: &StepGraphon<T>,
    n: usize,
    seed: u64,
    law: &LimitLaw,
) -> Result<SampleRecord> {
    let g = sample_graph(w, n, seed)?;
    normalized_statistic(h, w, &g, law, seed)
}
