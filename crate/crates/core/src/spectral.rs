//! Spectra of step-kernel integral operators.
//!
//! For a step kernel with block weights `π` and values `B`, the operator
//! `T_W` restricted to block-constant functions is `f ↦ B diag(π) f`, which
//! is similar to the symmetric matrix `D^{1/2} B D^{1/2}` with `D = diag(π)`.
//! All nonzero eigenvalues of `T_W` live there; functions orthogonal to the
//! block-constant ones are annihilated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{automorphism_count, LabeledGraph};
use crate::scalar::{Real, Scalar};

/// Eigenvalues with `|λ|` at or below this are treated as zero.
pub const DEFAULT_TRUNCATION: f64 = 1e-10;

/// Matching window for removing the degree eigenvalue.
pub const SPEC_MINUS_TOLERANCE: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues and the matching orthonormal eigenvectors
/// (as rows of the returned vector, one per eigenvalue), unsorted.
pub fn symmetric_eigen<T: Real>(mut a: Vec<Vec<T>>) -> (Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect();
    let frobenius: T = a.iter().flatten().map(|&x| x * x).sum::<T>().sqrt();
    let target = T::epsilon() * frobenius;
    let half = T::from(0.5).expect("0.5 representable");

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<T>()
            .sqrt();
        if off <= target || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= T::min_positive_value() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) * half / apq;
                let t = if theta.abs() > T::one() / T::epsilon() {
                    half / theta
                } else {
                    let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);
                a[p][p] = a[p][p] - t * apq;
                a[q][q] = a[q][q] + t * apq;
                a[p][q] = T::zero();
                a[q][p] = T::zero();
                for r in 0..n {
                    if r != p && r != q {
                        let g = a[r][p];
                        let h = a[r][q];
                        a[r][p] = g - s * (h + g * tau);
                        a[p][r] = a[r][p];
                        a[r][q] = h + s * (g - h * tau);
                        a[q][r] = a[r][q];
                    }
                }
                for row in v.iter_mut() {
                    let g = row[p];
                    let h = row[q];
                    row[p] = g - s * (h + g * tau);
                    row[q] = h + s * (g - h * tau);
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}

/// Nonzero eigenvalues of `T_K` with block-constant eigenfunctions,
/// orthonormal in `L²([0,1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Vec<Vec<T>>,
    pi: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorted in decreasing order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Block values of each eigenfunction, aligned with [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &[Vec<T>] {
        &self.eigenvectors
    }

    pub fn weights(&self) -> &[T] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `max ‖T_K φ − λ φ‖₂` over all eigenpairs.
    pub fn max_residual(&self, kernel: &StepGraphon<T>) -> T {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lambda, phi)| {
                kernel
                    .apply(phi)
                    .iter()
                    .zip(phi)
                    .zip(&self.pi)
                    .map(|((&tf, &f), &w)| (tf - lambda * f) * (tf - lambda * f) * w)
                    .sum::<T>()
                    .sqrt()
            })
            .fold(T::zero(), T::max)
    }

    /// `⟨φ_i, φ_j⟩` in `L²([0,1])`.
    pub fn inner(&self, i: usize, j: usize) -> T {
        self.eigenvectors[i]
            .iter()
            .zip(&self.eigenvectors[j])
            .zip(&self.pi)
            .map(|((&a, &b), &w)| a * b * w)
            .sum()
    }

    /// `Spec⁻`: the eigenvalue multiset with one copy of the eigenvalue
    /// closest to `d` removed. Fails when none lies within `tolerance`.
    pub fn minus(&self, d: T, tolerance: f64) -> Result<Vec<T>> {
        let closest = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, (l - d).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite eigenvalues"));
        match closest {
            Some((i, gap)) if gap.to_f64_lossy() <= tolerance => {
                let mut rest = self.eigenvalues.clone();
                rest.remove(i);
                Ok(rest)
            }
            _ => Err(Error::EigenvalueNotFound {
                target: d.to_f64_lossy(),
                tolerance,
            }),
        }
    }

    pub fn to_json(&self) -> SpectrumJson {
        let f = |v: &[T]| v.iter().map(Scalar::to_f64_lossy).collect::<Vec<f64>>();
        SpectrumJson {
            eigenvalues: f(&self.eigenvalues),
            eigenvectors: self.eigenvectors.iter().map(|v| f(v)).collect(),
            pi: f(&self.pi),
        }
    }
}

/// `{"eigenvalues": [...], "eigenvectors": [[...], ...], "pi": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub pi: Vec<f64>,
}

pub fn spectrum<T: Real>(kernel: &StepGraphon<T>) -> Result<Spectrum<T>> {
    spectrum_with_truncation(kernel, DEFAULT_TRUNCATION)
}

pub fn spectrum_with_truncation<T: Real>(kernel: &StepGraphon<T>, truncation: f64) -> Result<Spectrum<T>> {
    let (coarse, assign) = kernel.coarsen();
    let k = coarse.blocks();
    let root: Vec<T> = coarse.weights().iter().map(|w| w.sqrt()).collect();
    let m = (0..k)
        .map(|i| (0..k).map(|j| root[i] * *coarse.value(i, j) * root[j]).collect())
        .collect();
    let (values, vectors) = symmetric_eigen(m);

    let mut pairs: Vec<(T, Vec<T>)> = values
        .into_iter()
        .zip(vectors)
        .filter(|(l, _)| l.abs().to_f64_lossy() > truncation)
        .map(|(l, u)| {
            let mut phi: Vec<T> = assign.iter().map(|&c| u[c] / root[c]).collect();
            let scale = phi.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            let lead = phi
                .iter()
                .copied()
                .find(|x| x.abs() > scale * T::from(1e-8).unwrap());
            if lead.is_some_and(|x| x < T::zero()) {
                phi.iter_mut().for_each(|x| *x = -*x);
            }
            (l, phi)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        pi: kernel.weights().to_vec(),
    })
}

/// `d_{W_H} = v(v−1)/(2|Aut(H)|) · t(H, W)`, the degree of the two-point
/// graphon when `W` is H-regular.
pub fn dwh<T: Scalar>(h: &LabeledGraph, w: &StepGraphon<T>) -> Result<T> {
    let v = h.vertex_count();
    let aut = automorphism_count(h)? as usize;
    Ok(T::ratio(v * (v - 1), 2 * aut) * crate::density::hom_density(h, w)?)
}

pub fn spec_minus<T: Real>(spectrum: &Spectrum<T>, d: T) -> Result<Vec<T>> {
    spectrum.minus(d, SPEC_MINUS_TOLERANCE)
}
