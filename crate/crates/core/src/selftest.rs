//! Closed-form checks runnable from the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::density::{hom_density, regularity_defect, two_point_graphon};
use crate::error::Result;
use crate::graphon::{KernelSpec, StepGraphon};
use crate::graphs::{automorphism_count, count_copies, LabeledGraph};
use crate::limits::{sigma_squared, tau_squared};
use crate::sampler::sample_graph;
use crate::spectral::{dwh, spec_minus, spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn two_block(p: &BigRational) -> Result<StepGraphon<BigRational>> {
    StepGraphon::new(
        vec![q(1, 2), q(1, 2)],
        vec![
            vec![p.clone(), BigRational::zero()],
            vec![BigRational::zero(), p.clone()],
        ],
    )
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// `∏_v (1/m) Σ_i x̄_i^{deg v}` with `x̄_i = (2i+1)/(2m)`: the density of a
/// pattern in the `m`-cell discretization of `W(x,y) = xy`.
fn separable_product_density(f: &LabeledGraph, m: i64) -> BigRational {
    f.degrees()
        .iter()
        .map(|&d| {
            (0..m).fold(BigRational::zero(), |acc, i| {
                acc + q(2 * i + 1, 2 * m).pow(d as i32)
            }) / q(m, 1)
        })
        .fold(BigRational::one(), |acc, x| acc * x)
}

pub fn run() -> Vec<Check> {
    let k2 = LabeledGraph::complete(2);
    let k3 = LabeledGraph::complete(3);
    let k12 = LabeledGraph::star(2);
    vec![
        check("automorphism counts", || {
            let got = [
                automorphism_count(&k3)?,
                automorphism_count(&k12)?,
                automorphism_count(&LabeledGraph::path(4))?,
            ];
            Ok((got == [6, 2, 2], format!("{got:?}")))
        }),
        check("two-point graphon of the cherry on the two-block graphon", || {
            let p = q(3, 10);
            let wh = two_point_graphon(&k12, &two_block(&p)?)?;
            let diag = &p * &p * q(3, 4);
            let ok = wh.values()
                == [
                    vec![diag.clone(), BigRational::zero()],
                    vec![BigRational::zero(), diag.clone()],
                ];
            Ok((ok, format!("diagonal {diag}")))
        }),
        check("sigma^2 of the cherry on the two-block graphon", || {
            let p = q(1, 2);
            let s = sigma_squared(&k12, &two_block(&p)?)?;
            Ok((s == q(1, 64), format!("{s}")))
        }),
        check("spectrum and Spec- of the cherry two-point graphon", || {
            let p: f64 = 0.5;
            let w = KernelSpec::TwoBlock { p }.discretize::<f64>(2)?;
            let spec = spectrum(&two_point_graphon(&k12, &w)?)?;
            let lambda = 3.0 * p * p / 8.0;
            let rest = spec_minus(&spec, dwh(&k12, &w)?)?;
            let ok = spec.len() == 2
                && spec.eigenvalues().iter().all(|l| (l - lambda).abs() <= 1e-10)
                && rest.len() == 1
                && (rest[0] - lambda).abs() <= 1e-10;
            Ok((ok, format!("spec {:?}, spec- {rest:?}", spec.eigenvalues())))
        }),
        check("sigma^2 of the triangle on a constant graphon", || {
            let p = q(1, 5);
            let s = sigma_squared(&k3, &StepGraphon::constant(p.clone())?)?;
            let expected = p.pow(5) * (BigRational::one() - p) / q(2, 1);
            Ok((s == expected, format!("{s}")))
        }),
        check("regularity of constant and two-block graphons", || {
            let c = StepGraphon::constant(q(2, 5))?;
            let mut ok = true;
            for h in [&k2, &k12, &k3] {
                ok &= regularity_defect(h, &c)?.is_zero();
            }
            ok &= regularity_defect(&k12, &two_block(&q(1, 2))?)?.is_zero();
            let prod = KernelSpec::Product.discretize::<f64>(256)?;
            let defect = regularity_defect(&k12, &prod)?;
            Ok((ok && defect > 1e-4, format!("product defect {defect:.6e}")))
        }),
        check("cherry density in the product kernel", || {
            let m = 16;
            let t = hom_density(&k12, &KernelSpec::Product.discretize::<BigRational>(m)?)?;
            Ok((t == separable_product_density(&k12, m as i64), format!("{t}")))
        }),
        check("tau^2 of the cherry in the product kernel", || {
            let oracle = (1.0 / 80.0 + 4.0 / 108.0 + 4.0 / 96.0 - 9.0 / 144.0) / 4.0;
            let tau = tau_squared(&k12, &KernelSpec::Product.discretize::<f64>(256)?)?;
            Ok(((tau - oracle).abs() < 1e-3, format!("{tau:.8e} vs {oracle:.8e}")))
        }),
        check("cherry count equals sum of C(deg, 2)", || {
            let w = StepGraphon::new(vec![0.4, 0.6], vec![vec![0.7, 0.2], vec![0.2, 0.5]])?;
            let g = sample_graph(&w, 60, 17)?;
            let closed: u64 = g
                .degrees()
                .iter()
                .map(|&d| (d * d.saturating_sub(1) / 2) as u64)
                .sum();
            let counted = count_copies(&k12, &g)?;
            Ok((closed == counted, format!("{counted}")))
        }),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
