//! Homomorphism densities in step graphons.
//!
//! `t(F, W)` for a step graphon is the finite sum over block assignments
//! `φ: V(F) → blocks` of `∏_v π_{φ(v)} ∏_{ab ∈ E(F)} B_{φ(a)φ(b)}^{mult}`.
//! The sum is evaluated exactly by eliminating one pattern vertex at a time
//! (sum-product over block indices), so trees cost `O(|V| k²)` instead of
//! `O(k^|V|)`. Conditional densities are the same contraction with the
//! marked vertices left free.

use crate::error::{Degeneracy, Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{automorphism_count, LabeledGraph, Pattern};
use crate::scalar::{abs_diff, max_of, Scalar};

/// Largest pattern accepted by the density engine.
pub const MAX_DENSITY_VERTICES: usize = 16;

/// Largest intermediate table (entries) built during elimination.
pub const MAX_FACTOR_ENTRIES: usize = 100_000_000;

pub const DEFAULT_REGULARITY_TOLERANCE: f64 = 1e-10;

/// A table over the blocks of the pattern vertices in `vars` (row-major,
/// last variable fastest).
#[derive(Debug, Clone)]
struct Factor<T> {
    vars: Vec<usize>,
    data: Vec<T>,
}

impl<T> Factor<T> {
    fn stride(&self, var: usize, k: usize) -> usize {
        match self.vars.iter().position(|&v| v == var) {
            Some(p) => k.pow((self.vars.len() - 1 - p) as u32),
            None => 0,
        }
    }
}

fn table_size(k: usize, vars: usize) -> Result<usize> {
    k.checked_pow(vars as u32)
        .filter(|&s| s <= MAX_FACTOR_ENTRIES)
        .ok_or_else(|| {
            Error::PatternTooLarge(format!(
                "elimination needs a table over {vars} vertices with {k} blocks each"
            ))
        })
}

/// Multiplies `factors` into a table over `out_vars`, optionally summing
/// `sum_var` out against the block weights.
fn combine<T: Scalar>(
    factors: &[Factor<T>],
    out_vars: &[usize],
    sum_var: Option<usize>,
    pi: &[T],
    k: usize,
) -> Result<Factor<T>> {
    table_size(k, out_vars.len() + usize::from(sum_var.is_some()))?;
    let len = k.pow(out_vars.len() as u32);
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| out_vars.iter().map(|&v| f.stride(v, k)).collect())
        .collect();
    let sum_strides: Vec<usize> = match sum_var {
        Some(v) => factors.iter().map(|f| f.stride(v, k)).collect(),
        None => vec![0; factors.len()],
    };
    let mut base = vec![0usize; factors.len()];
    let mut idx = vec![0usize; out_vars.len()];
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        let value = match sum_var {
            None => factors
                .iter()
                .zip(&base)
                .fold(T::one(), |acc, (f, &b)| acc * f.data[b].clone()),
            Some(_) => {
                let mut acc = T::zero();
                'blocks: for (blk, w) in pi.iter().enumerate() {
                    let mut prod = w.clone();
                    for ((f, &b), &s) in factors.iter().zip(&base).zip(&sum_strides) {
                        let entry = &f.data[b + blk * s];
                        if entry.is_zero() {
                            continue 'blocks;
                        }
                        prod = prod * entry.clone();
                    }
                    acc = acc + prod;
                }
                acc
            }
        };
        data.push(value);
        for u in (0..out_vars.len()).rev() {
            idx[u] += 1;
            for (b, s) in base.iter_mut().zip(&strides) {
                *b += s[u];
            }
            if idx[u] < k {
                break;
            }
            idx[u] = 0;
            for (b, s) in base.iter_mut().zip(&strides) {
                *b -= k * s[u];
            }
        }
    }
    Ok(Factor {
        vars: out_vars.to_vec(),
        data,
    })
}

fn union_scope<T>(factors: &[Factor<T>]) -> Vec<usize> {
    let mut scope: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
    scope.sort_unstable();
    scope.dedup();
    scope
}

/// Contracts the pattern against `w`, integrating out every vertex not in
/// `free` (0-based). The result is indexed by the blocks of `free`, in the
/// given order.
fn contract<T: Scalar>(
    edges: &[((usize, usize), u32)],
    vertex_count: usize,
    free: &[usize],
    w: &StepGraphon<T>,
) -> Result<Vec<T>> {
    if vertex_count > MAX_DENSITY_VERTICES {
        return Err(Error::PatternTooLarge(format!(
            "density supports at most {MAX_DENSITY_VERTICES} vertices, got {vertex_count}"
        )));
    }
    let k = w.blocks();
    let pi = w.weights();
    let mut factors: Vec<Factor<T>> = edges
        .iter()
        .map(|&((a, b), mult)| {
            let data = (0..k * k)
                .map(|c| {
                    let base = w.value(c / k, c % k);
                    (1..mult).fold(base.clone(), |acc, _| acc * base.clone())
                })
                .collect();
            Factor {
                vars: vec![a - 1, b - 1],
                data,
            }
        })
        .collect();

    let mut remaining: Vec<usize> = (0..vertex_count).filter(|v| !free.contains(v)).collect();
    while !remaining.is_empty() {
        // greedy min-scope elimination order, ties by lowest label
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &v)| {
                let mut scope: Vec<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&v))
                    .flat_map(|f| f.vars.iter().copied())
                    .collect();
                scope.sort_unstable();
                scope.dedup();
                (pos, scope.len())
            })
            .min_by_key(|&(pos, size)| (size, pos))
            .expect("non-empty");
        let v = remaining.remove(pos);
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        if touching.is_empty() {
            let mass = pi.iter().cloned().fold(T::zero(), |a, b| a + b);
            factors.push(Factor {
                vars: vec![],
                data: vec![mass],
            });
            continue;
        }
        let out: Vec<usize> = union_scope(&touching).into_iter().filter(|&u| u != v).collect();
        factors.push(combine(&touching, &out, Some(v), pi, k)?);
    }
    Ok(combine(&factors, free, None, pi, k)?.data)
}

/// `t(F, W)`.
pub fn hom_density<T: Scalar, P: Pattern + ?Sized>(f: &P, w: &StepGraphon<T>) -> Result<T> {
    let mut out = contract(&f.weighted_edges(), f.vertex_count(), &[], w)?;
    Ok(out.pop().expect("scalar result"))
}

/// `t_a(x, H, W)` for marked vertices `a = (a_1..a_K)`, as a table over the
/// blocks of `x_1..x_K` (row-major, `x_K` fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDensity<T> {
    marks: Vec<usize>,
    blocks: usize,
    values: Vec<T>,
}

impl<T: Scalar> ConditionalDensity<T> {
    pub fn marks(&self) -> &[usize] {
        &self.marks
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Value when marked vertex `j` sits in block `blocks[j]`.
    pub fn value(&self, blocks: &[usize]) -> &T {
        assert_eq!(blocks.len(), self.marks.len());
        let idx = blocks.iter().fold(0, |acc, &b| acc * self.blocks + b);
        &self.values[idx]
    }

    /// Integrates every marked coordinate against `pi`.
    pub fn marginalize(&self, pi: &[T]) -> T {
        let k = self.blocks;
        self.values
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (mut idx, v)| {
                let mut weight = T::one();
                for _ in 0..self.marks.len() {
                    weight = weight * pi[idx % k].clone();
                    idx /= k;
                }
                acc + weight * v.clone()
            })
    }
}

pub fn conditional_density<T: Scalar, P: Pattern + ?Sized>(
    h: &P,
    marks: &[usize],
    w: &StepGraphon<T>,
) -> Result<ConditionalDensity<T>> {
    let v = h.vertex_count();
    if marks.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one marked vertex required".into(),
        ));
    }
    for (i, &a) in marks.iter().enumerate() {
        if a == 0 || a > v {
            return Err(Error::VertexOutOfRange {
                vertex: a,
                vertex_count: v,
            });
        }
        if marks[..i].contains(&a) {
            return Err(Error::InvalidArgument(format!("vertex {a} marked twice")));
        }
    }
    let free: Vec<usize> = marks.iter().map(|a| a - 1).collect();
    let values = contract(&h.weighted_edges(), v, &free, w)?;
    Ok(ConditionalDensity {
        marks: marks.to_vec(),
        blocks: w.blocks(),
        values,
    })
}

/// `t_a(x, H, W)` for every vertex `a`, each as a vector over blocks.
pub fn one_point_densities<T: Scalar, P: Pattern + ?Sized>(h: &P, w: &StepGraphon<T>) -> Result<Vec<Vec<T>>> {
    (1..=h.vertex_count())
        .map(|a| Ok(conditional_density(h, &[a], w)?.values))
        .collect()
}

pub(crate) fn falling_factorial<T: Scalar>(n: usize, v: usize) -> T {
    (0..v).fold(T::one(), |acc, i| acc * T::from_count(n - i))
}

/// `E X_n(H, W) = (n)_v / |Aut(H)| · t(H, W)`.
pub fn mean_count<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>, n: usize) -> Result<T> {
    let v = h.vertex_count();
    if n < v {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is smaller than |V(H)| = {v}"
        )));
    }
    let aut = automorphism_count(h)? as usize;
    Ok(falling_factorial::<T>(n, v) / T::from_count(aut) * hom_density(h, w)?)
}

/// Outcome of an H-regularity test.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularity<T> {
    pub density: T,
    /// `t̄(x, H, W) = (1/v) Σ_a t_a(x, H, W)` per block.
    pub vertex_average: Vec<T>,
    /// `max_x |t̄(x) − t(H,W)|`.
    pub defect: T,
    pub tolerance: f64,
    pub regular: bool,
}

/// Tests H-regularity of a graphon, rejecting the complete and the
/// pattern-free cases.
pub fn regularity<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>, tolerance: f64) -> Result<Regularity<T>> {
    if !w.is_graphon() {
        return Err(Error::InvalidGraphon(
            "regularity is defined for graphons with values in [0,1]".into(),
        ));
    }
    if w.is_complete() {
        return Err(Error::Degenerate(Degeneracy::Complete));
    }
    let density = hom_density(h, w)?;
    if density.is_zero() {
        return Err(Error::Degenerate(Degeneracy::PatternFree));
    }
    let v = h.vertex_count();
    let per_vertex = one_point_densities(h, w)?;
    let vertex_average: Vec<T> = (0..w.blocks())
        .map(|x| per_vertex.iter().fold(T::zero(), |acc, t| acc + t[x].clone()) / T::from_count(v))
        .collect();
    let defect = max_of(vertex_average.iter().map(|t| abs_diff(t, &density)));
    let regular = defect.to_f64_lossy() <= tolerance;
    Ok(Regularity {
        density,
        vertex_average,
        defect,
        tolerance,
        regular,
    })
}

pub fn regularity_defect<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<T> {
    Ok(regularity(h, w, DEFAULT_REGULARITY_TOLERANCE)?.defect)
}

/// The 2-point conditional graphon
/// `W_H(x,y) = 1/(2|Aut(H)|) Σ_{a≠b} t_{(a,b)}((x,y), H, W)` as a step
/// kernel on the partition of `w`.
pub fn two_point_graphon<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<StepGraphon<T>> {
    let v = h.vertex_count();
    if v < 2 {
        return Err(Error::InvalidArgument(
            "two-point graphon needs |V(H)| ≥ 2".into(),
        ));
    }
    let k = w.blocks();
    let mut acc = vec![vec![T::zero(); k]; k];
    // t_{(b,a)}(x,y) = t_{(a,b)}(y,x)
    for a in 1..=v {
        for b in a + 1..=v {
            let t = conditional_density(h, &[a, b], w)?;
            for x in 0..k {
                for y in x..k {
                    acc[x][y] = acc[x][y].clone() + t.value(&[x, y]).clone() + t.value(&[y, x]).clone();
                }
            }
        }
    }
    for x in 0..k {
        for y in 0..x {
            acc[x][y] = acc[y][x].clone();
        }
    }
    let scale = T::from_count(2 * automorphism_count(h)? as usize);
    let values = acc
        .into_iter()
        .map(|row| row.into_iter().map(|c| c / scale.clone()).collect())
        .collect();
    StepGraphon::kernel(w.weights().to_vec(), values)
}
