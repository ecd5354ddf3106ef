//! Monte Carlo experiments comparing the empirical law of the normalized
//! count against its theoretical limit.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{mean_count, regularity, DEFAULT_REGULARITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::graphon::{KernelSpec, StepGraphon};
use crate::graphs::LabeledGraph;
use crate::limits::{limit_law, sample_limit, LimitLaw};
use crate::sampler::{replicate, SampleRecord};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "GRAPHONLAB_THREADS";

/// Two-sample Kolmogorov–Smirnov distance `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("NaN in sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_regularity")]
    pub regularity: f64,
    #[serde(default = "default_ks")]
    pub ks_threshold: f64,
    /// Relative band for the empirical variance around the limit variance;
    /// unchecked when absent.
    #[serde(default)]
    pub variance_rel_tol: Option<f64>,
    /// Band, in standard errors, for the mean raw count.
    #[serde(default = "default_mean_se")]
    pub mean_standard_errors: f64,
}

fn default_regularity() -> f64 {
    DEFAULT_REGULARITY_TOLERANCE
}
fn default_ks() -> f64 {
    0.08
}
fn default_mean_se() -> f64 {
    4.0
}
fn default_m() -> usize {
    256
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            regularity: default_regularity(),
            ks_threshold: default_ks(),
            variance_rel_tol: None,
            mean_standard_errors: default_mean_se(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub pattern: LabeledGraph,
    pub kernel: KernelSpec,
    #[serde(default = "default_m")]
    pub discretization: usize,
    pub n: usize,
    pub replicates: usize,
    pub reference_draws: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!("unsupported schema_version {}", self.schema_version));
        }
        if self.replicates == 0 {
            return fail("replicates must be at least 1".into());
        }
        if self.n < self.pattern.vertex_count() {
            return fail(format!("n = {} is smaller than the pattern", self.n));
        }
        if self.reference_draws < 1000 {
            return fail("reference_draws must be at least 1000".into());
        }
        if self.discretization == 0 {
            return fail("discretization must be positive".into());
        }
        self.kernel.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self { mean, variance }
    }
}

/// Sensitivity of the limit constants to the discretization level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationCheck {
    pub m: usize,
    pub defect_m: f64,
    pub defect_2m: f64,
    pub limit_variance_m: f64,
    pub limit_variance_2m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCountCheck {
    pub mean: f64,
    pub standard_error: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub ks: bool,
    pub variance: Option<bool>,
    pub mean_count: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub limit_law: LimitLaw,
    pub limit_variance: f64,
    pub regularity_defect: f64,
    pub discretization_check: DiscretizationCheck,
    pub empirical: Moments,
    pub reference: Moments,
    pub ks_distance: f64,
    pub raw_count: RawCountCheck,
    pub checks: Checks,
    pub passed: bool,
    pub records: Vec<SampleRecord>,
}

/// SplitMix64 finalizer over `(master, stream, index)`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03)
        ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const REPLICATE_STREAM: u64 = 0;
const REFERENCE_STREAM: u64 = 1;

/// Runs `f` on a pool sized by `GRAPHONLAB_THREADS` when set, otherwise on
/// the global rayon pool.
pub fn with_worker_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let threads: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

fn discretized(cfg: &ExperimentConfig, m: usize) -> Result<StepGraphon<f64>> {
    Ok(cfg.kernel.discretize::<f64>(m)?.coarsen().0)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    with_worker_pool(|| run_in_pool(cfg))?
}

fn run_in_pool(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let h = &cfg.pattern;
    let tol = &cfg.tolerances;
    let m = cfg.discretization;
    let w = discretized(cfg, m)?;
    let w2 = discretized(cfg, 2 * m)?;

    let law = limit_law(h, &w, tol.regularity)?;
    let law2 = limit_law(h, &w2, tol.regularity)?;
    let defect = regularity(h, &w, tol.regularity)?.defect;
    let defect2 = regularity(h, &w2, tol.regularity)?.defect;

    let records: Vec<SampleRecord> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|i| {
            replicate(
                h,
                &w,
                cfg.n,
                derive_seed(cfg.master_seed, REPLICATE_STREAM, i),
                &law,
            )
        })
        .collect::<Result<_>>()?;
    let reference_sample = sample_limit(
        &law,
        derive_seed(cfg.master_seed, REFERENCE_STREAM, 0),
        cfg.reference_draws,
    );

    let normalized: Vec<f64> = records.iter().map(|r| r.normalized).collect();
    let empirical = Moments::of(&normalized);
    let reference = Moments::of(&reference_sample);
    let ks = ks_distance(&normalized, &reference_sample)?;
    let limit_variance = law.variance();

    let raw: Vec<f64> = records.iter().map(|r| r.raw_count as f64).collect();
    let raw_moments = Moments::of(&raw);
    let standard_error = (raw_moments.variance / raw.len() as f64).sqrt();
    let expected = mean_count(h, &w, cfg.n)?;
    let gap = (raw_moments.mean - expected).abs();
    let mean_ok = if standard_error > 0.0 {
        gap <= tol.mean_standard_errors * standard_error
    } else {
        gap <= 1e-9 * expected.abs().max(1.0)
    };

    let checks = Checks {
        ks: ks < tol.ks_threshold,
        variance: tol
            .variance_rel_tol
            .map(|rel| (empirical.variance - limit_variance).abs() <= rel * limit_variance),
        mean_count: mean_ok,
    };
    let passed = checks.ks && checks.variance.unwrap_or(true) && checks.mean_count;

    Ok(ExperimentResult {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        limit_law: law,
        limit_variance,
        regularity_defect: defect,
        discretization_check: DiscretizationCheck {
            m,
            defect_m: defect,
            defect_2m: defect2,
            limit_variance_m: limit_variance,
            limit_variance_2m: law2.variance(),
        },
        empirical,
        reference,
        ks_distance: ks,
        raw_count: RawCountCheck {
            mean: raw_moments.mean,
            standard_error,
            expected,
        },
        checks,
        passed,
        records,
    })
}

#[derive(Serialize)]
struct CsvRow {
    replicate: usize,
    seed: u64,
    raw_count: u64,
    normalized: f64,
}

/// Per-replicate CSV: `replicate,seed,raw_count,normalized`.
pub fn write_replicates_csv<W: Write>(records: &[SampleRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for (replicate, r) in records.iter().enumerate() {
        writer.serialize(CsvRow {
            replicate,
            seed: r.seed,
            raw_count: r.raw_count,
            normalized: r.normalized,
        })?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(ks_distance(&[-3.0, -1.0], &[0.5, 2.0, 7.0]).unwrap(), 1.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[1.5, 2.5]).unwrap(), 0.5);
        assert!(matches!(ks_distance(&[], &[1.0]), Err(Error::EmptySample)));
        // ties across samples
        assert_eq!(
            ks_distance(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap(),
            1.0 / 3.0
        );
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seeds: Vec<u64> = (0..1000).map(|i| derive_seed(42, 0, i)).collect();
        seeds.push(derive_seed(42, 1, 0));
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 1001);
    }

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            schema_version: 1,
            pattern: LabeledGraph::star(2),
            kernel: KernelSpec::TwoBlock { p: 0.5 },
            discretization: 4,
            n: 20,
            replicates: 50,
            reference_draws: 1000,
            master_seed: 3,
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_config();
        assert!(cfg.validate().is_ok());
        cfg.reference_draws = 10;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = small_config();
        cfg.n = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small_config();
        cfg.schema_version = 2;
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_json("{\"schema_version\":1}").is_err());
    }

    #[test]
    fn config_json_defaults() {
        let text = r#"{
            "schema_version": 1,
            "pattern": {"n": 3, "edges": [[1,2],[1,3]]},
            "kernel": {"kind": "two_block", "p": 0.5},
            "n": 30, "replicates": 10, "reference_draws": 1000, "master_seed": 1
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.discretization, 256);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn small_run_is_deterministic() {
        let cfg = small_config();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.records.len(), 50);
        assert!(!a.limit_law.is_gaussian());
        assert!((0.0..=1.0).contains(&a.ks_distance));
    }

    #[test]
    fn degenerate_run_fails_cleanly() {
        let mut cfg = small_config();
        cfg.pattern = LabeledGraph::complete(3);
        cfg.kernel = KernelSpec::Constant { p: 1.0 };
        assert!(matches!(run_experiment(&cfg), Err(Error::Degenerate(_))));
    }

    #[test]
    fn csv_layout() {
        let records = vec![
            SampleRecord {
                n: 5,
                seed: 9,
                raw_count: 3,
                normalized: 0.1,
            },
            SampleRecord {
                n: 5,
                seed: 10,
                raw_count: 4,
                normalized: -1.5e-7,
            },
        ];
        let mut buf = Vec::new();
        write_replicates_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "replicate,seed,raw_count,normalized\n0,9,3,0.1\n1,10,4,-1.5e-7\n"
        );
    }
}
