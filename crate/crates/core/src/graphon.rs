//! Step graphons and the parametric kernels that discretize into them.
//!
//! A [`StepGraphon`] is a partition of `[0,1]` into consecutive blocks with
//! lengths `pi` and a symmetric matrix of block values. The same type also
//! carries derived symmetric kernels (such as two-point conditional
//! graphons) whose values may leave `[0,1]`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance on `Σ pi = 1` for floating-point block weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon<T> {
    pi: Vec<T>,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> StepGraphon<T> {
    /// A symmetric step kernel with arbitrary real values.
    pub fn kernel(pi: Vec<T>, values: Vec<Vec<T>>) -> Result<Self> {
        let k = pi.len();
        if k == 0 {
            return Err(Error::InvalidGraphon("no blocks".into()));
        }
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidGraphon(format!("value matrix must be {k}x{k}")));
        }
        if let Some(i) = pi
            .iter()
            .position(|w| *w <= T::zero() || !w.to_f64_lossy().is_finite())
        {
            return Err(Error::InvalidGraphon(format!("block weight {i} is not positive")));
        }
        let total = pi.iter().cloned().fold(T::zero(), |a, b| a + b);
        let slack = WEIGHT_SUM_TOLERANCE.max(4.0 * k as f64 * T::unit_roundoff());
        if (total.clone() - T::one()).abs().to_f64_lossy() > slack {
            return Err(Error::InvalidGraphon(format!(
                "block weights sum to {}, not 1",
                total.to_f64_lossy()
            )));
        }
        for i in 0..k {
            for j in 0..k {
                if !values[i][j].to_f64_lossy().is_finite() {
                    return Err(Error::InvalidGraphon(format!("non-finite value at ({i},{j})")));
                }
                if values[i][j] != values[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { pi, values })
    }

    /// A graphon: a symmetric step kernel with values in `[0,1]`.
    pub fn new(pi: Vec<T>, values: Vec<Vec<T>>) -> Result<Self> {
        let w = Self::kernel(pi, values)?;
        if !w.is_graphon() {
            return Err(Error::InvalidGraphon("graphon values must lie in [0,1]".into()));
        }
        Ok(w)
    }

    /// `k` equal blocks.
    pub fn uniform(values: Vec<Vec<T>>) -> Result<Self> {
        let k = values.len();
        Self::kernel(vec![T::ratio(1, k.max(1)); k], values)
    }

    pub fn constant(p: T) -> Result<Self> {
        Self::new(vec![T::one()], vec![vec![p]])
    }

    pub fn blocks(&self) -> usize {
        self.pi.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.pi
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> &T {
        &self.values[i][j]
    }

    pub fn is_graphon(&self) -> bool {
        self.values
            .iter()
            .flatten()
            .all(|v| *v >= T::zero() && *v <= T::one())
    }

    /// `W ≡ 1`.
    pub fn is_complete(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_one())
    }

    /// Index of the block containing `x`; blocks are `[c_i, c_{i+1})` with
    /// the last one closed at 1.
    pub fn block_of(&self, x: &T) -> Result<usize> {
        if *x < T::zero() || *x > T::one() {
            return Err(Error::OutOfRange(x.to_f64_lossy()));
        }
        let mut upper = T::zero();
        for (i, w) in self.pi.iter().enumerate() {
            upper = upper + w.clone();
            if *x < upper {
                return Ok(i);
            }
        }
        Ok(self.pi.len() - 1)
    }

    pub fn evaluate(&self, x: &T, y: &T) -> Result<T> {
        Ok(self.values[self.block_of(x)?][self.block_of(y)?].clone())
    }

    /// Degree function `d(x) = ∫ W(x,y) dy`, one value per block.
    pub fn degree(&self) -> Vec<T> {
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.pi)
                    .fold(T::zero(), |acc, (b, w)| acc + b.clone() * w.clone())
            })
            .collect()
    }

    /// `∬ W`.
    pub fn edge_density(&self) -> T {
        self.degree()
            .into_iter()
            .zip(&self.pi)
            .fold(T::zero(), |acc, (d, w)| acc + d * w.clone())
    }

    /// `T_W f` for a block-constant `f`.
    pub fn apply(&self, f: &[T]) -> Vec<T> {
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.pi)
                    .zip(f)
                    .fold(T::zero(), |acc, ((b, w), x)| {
                        acc + b.clone() * w.clone() * x.clone()
                    })
            })
            .collect()
    }

    /// Merges blocks whose value rows are identical. Returns the coarser
    /// kernel (same function on `[0,1]²` up to a measure-preserving
    /// rearrangement) and, for every original block, its coarse block.
    pub fn coarsen(&self) -> (Self, Vec<usize>) {
        let k = self.blocks();
        let mut rep: Vec<usize> = Vec::new();
        let mut assign = vec![0; k];
        for i in 0..k {
            match rep.iter().position(|&r| self.values[r] == self.values[i]) {
                Some(c) => assign[i] = c,
                None => {
                    assign[i] = rep.len();
                    rep.push(i);
                }
            }
        }
        let mut pi = vec![T::zero(); rep.len()];
        for (i, &c) in assign.iter().enumerate() {
            pi[c] = pi[c].clone() + self.pi[i].clone();
        }
        let values = rep
            .iter()
            .map(|&r| rep.iter().map(|&s| self.values[r][s].clone()).collect())
            .collect();
        (Self { pi, values }, assign)
    }

    /// Splits every block into two halves; the kernel is unchanged.
    pub fn refine(&self) -> Self {
        let half = T::ratio(1, 2);
        let pi = self
            .pi
            .iter()
            .flat_map(|w| {
                let h = w.clone() * half.clone();
                [h.clone(), h]
            })
            .collect();
        let values = (0..2 * self.blocks())
            .map(|i| {
                (0..2 * self.blocks())
                    .map(|j| self.values[i / 2][j / 2].clone())
                    .collect()
            })
            .collect();
        Self { pi, values }
    }

    pub fn to_f64(&self) -> StepGraphon<f64> {
        StepGraphon {
            pi: self.pi.iter().map(Scalar::to_f64_lossy).collect(),
            values: self
                .values
                .iter()
                .map(|r| r.iter().map(Scalar::to_f64_lossy).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> StepGraphonJson {
        let f = self.to_f64();
        StepGraphonJson {
            pi: f.pi,
            b: f.values,
        }
    }
}

/// `{"pi": [...], "B": [[...], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepGraphonJson {
    pub pi: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
}

impl StepGraphonJson {
    pub fn to_kernel<T: Scalar>(&self) -> Result<StepGraphon<T>> {
        let conv = |x: f64| {
            T::from_f64_lossy(x).ok_or_else(|| Error::InvalidGraphon(format!("value {x} not representable")))
        };
        let pi = self.pi.iter().map(|&x| conv(x)).collect::<Result<_>>()?;
        let values = self
            .b
            .iter()
            .map(|r| r.iter().map(|&x| conv(x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        StepGraphon::kernel(pi, values)
    }

    pub fn to_graphon<T: Scalar>(&self) -> Result<StepGraphon<T>> {
        let w = self.to_kernel()?;
        if !w.is_graphon() {
            return Err(Error::InvalidGraphon("graphon values must lie in [0,1]".into()));
        }
        Ok(w)
    }
}

/// Parametric kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `W ≡ p`.
    Constant { p: f64 },
    /// `W(x,y) = xy`.
    Product,
    /// `p` on `[0,½]² ∪ [½,1]²`, 0 elsewhere.
    TwoBlock { p: f64 },
    Custom {
        pi: Vec<f64>,
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
    },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Constant { p } | KernelSpec::TwoBlock { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidGraphon(format!("parameter {p} outside [0,1]")));
                }
            }
            KernelSpec::Product => {}
            KernelSpec::Custom { pi, b } => {
                StepGraphonJson {
                    pi: pi.clone(),
                    b: b.clone(),
                }
                .to_graphon::<f64>()?;
            }
        }
        Ok(())
    }

    fn param<T: Scalar>(p: f64) -> Result<T> {
        T::from_f64_lossy(p).ok_or_else(|| Error::InvalidGraphon(format!("{p} not representable")))
    }

    /// Step function already exact at the given breakpoints, if any.
    fn step_form<T: Scalar>(&self) -> Result<Option<StepGraphon<T>>> {
        Ok(match self {
            KernelSpec::Constant { p } => Some(StepGraphon::constant(Self::param(*p)?)?),
            KernelSpec::TwoBlock { p } => {
                let p: T = Self::param(*p)?;
                Some(StepGraphon::new(
                    vec![T::ratio(1, 2); 2],
                    vec![vec![p.clone(), T::zero()], vec![T::zero(), p]],
                )?)
            }
            KernelSpec::Custom { pi, b } => Some(
                StepGraphonJson {
                    pi: pi.clone(),
                    b: b.clone(),
                }
                .to_graphon()?,
            ),
            KernelSpec::Product => None,
        })
    }

    /// The kernel itself when it is a step function, otherwise its `m`-block
    /// discretization.
    pub fn step_graphon<T: Scalar>(&self, m: usize) -> Result<StepGraphon<T>> {
        self.validate()?;
        match self.step_form()? {
            Some(step) => Ok(step),
            None => self.discretize(m),
        }
    }

    /// Uniform `m`-block step graphon whose value on each cell is the exact
    /// average of the kernel over that cell.
    pub fn discretize<T: Scalar>(&self, m: usize) -> Result<StepGraphon<T>> {
        if m == 0 {
            return Err(Error::InvalidArgument("discretization needs m ≥ 1".into()));
        }
        self.validate()?;
        let values = match self.step_form::<T>()? {
            // ∫∫ xy over a cell / area = midpoint product
            None => {
                let denom = 4 * m * m;
                (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| T::ratio((2 * i + 1) * (2 * j + 1), denom))
                            .collect()
                    })
                    .collect()
            }
            Some(step) => cell_averages(&step, m),
        };
        StepGraphon::new(vec![T::ratio(1, m); m], values)
    }
}

/// Overlap lengths `|[i/m, (i+1)/m) ∩ block_r|`, scaled by `m`.
fn overlap_fractions<T: Scalar>(pi: &[T], m: usize) -> Vec<Vec<T>> {
    let mut lower = T::zero();
    let mut out = Vec::with_capacity(pi.len());
    for w in pi {
        let upper = lower.clone() + w.clone();
        let row = (0..m)
            .map(|i| {
                let a = T::ratio(i, m);
                let b = T::ratio(i + 1, m);
                let lo = if a > lower { a } else { lower.clone() };
                let hi = if b < upper { b } else { upper.clone() };
                if hi > lo {
                    (hi - lo) * T::from_count(m)
                } else {
                    T::zero()
                }
            })
            .collect();
        out.push(row);
        lower = upper;
    }
    out
}

fn cell_averages<T: Scalar>(step: &StepGraphon<T>, m: usize) -> Vec<Vec<T>> {
    let frac = overlap_fractions(step.weights(), m);
    let k = step.blocks();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = T::zero();
                    for r in 0..k {
                        if frac[r][i].is_zero() {
                            continue;
                        }
                        for s in 0..k {
                            acc = acc + frac[r][i].clone() * frac[s][j].clone() * step.value(r, s).clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `constant:0.3`, `two_block:0.5`, `product`, or a JSON object.
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            if let Ok(spec) = serde_json::from_str::<KernelSpec>(s) {
                return Ok(spec);
            }
            let raw: StepGraphonJson = serde_json::from_str(s)?;
            return Ok(KernelSpec::Custom { pi: raw.pi, b: raw.b });
        }
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let p = || -> Result<f64> {
            let a =
                arg.ok_or_else(|| Error::InvalidArgument(format!("kernel `{kind}` needs a parameter")))?;
            a.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad kernel parameter `{a}`")))
        };
        let spec = match kind {
            "constant" => KernelSpec::Constant { p: p()? },
            "two_block" => KernelSpec::TwoBlock { p: p()? },
            "product" if arg.is_none() => KernelSpec::Product,
            _ => return Err(Error::InvalidArgument(format!("unknown kernel `{s}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}
