use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphonlab::density::{hom_density, regularity, two_point_graphon, DEFAULT_REGULARITY_TOLERANCE};
use graphonlab::experiment::{run_experiment, write_replicates_csv, ExperimentConfig};
use graphonlab::graphs::GraphJson;
use graphonlab::limits::limit_constants;
use graphonlab::spectral::spectrum;
use graphonlab::{selftest, Error, Graphon, KernelSpec, LabeledGraph, Result};

#[derive(Parser)]
#[command(
    name = "graphonlab",
    version,
    about = "Subgraph counts in W-random graphs and their limit laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the homomorphism density t(F, W).
    Density(KernelArgs),
    /// Print the H-regularity defect and verdict.
    Regularity {
        #[command(flatten)]
        input: KernelArgs,
        #[arg(long, default_value_t = DEFAULT_REGULARITY_TOLERANCE)]
        tol: f64,
    },
    /// Print tau2, sigma2, d_WH, the spectrum of W_H and Spec-minus.
    Constants {
        #[command(flatten)]
        input: KernelArgs,
        #[arg(long, default_value_t = DEFAULT_REGULARITY_TOLERANCE)]
        tol: f64,
    },
    /// Print the spectrum of W_H as JSON, or of W itself without a pattern.
    Spectrum {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        kernel: String,
        #[arg(long, default_value_t = 256)]
        m: usize,
    },
    /// Run a Monte Carlo experiment and write result.json and replicates.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the closed-form checks.
    Selftest,
}

#[derive(Args)]
struct KernelArgs {
    /// Graph JSON file, or one of k2, k3, complete:R, star:K, path:L.
    #[arg(long)]
    pattern: String,
    /// constant:P, two_block:P, product, inline JSON, or a JSON file.
    #[arg(long)]
    kernel: String,
    /// Blocks used to discretize the product kernel.
    #[arg(long, default_value_t = 256)]
    m: usize,
}

fn read_arg(arg: &str) -> Result<String> {
    if Path::new(arg).is_file() {
        Ok(fs::read_to_string(arg)?)
    } else {
        Ok(arg.to_string())
    }
}

fn named_pattern(name: &str) -> Option<LabeledGraph> {
    let size = |s: &str| s.parse::<usize>().ok().filter(|&k| k >= 1);
    match name.to_ascii_lowercase().as_str() {
        "k2" => Some(LabeledGraph::complete(2)),
        "k3" => Some(LabeledGraph::complete(3)),
        "k12" => Some(LabeledGraph::star(2)),
        other => {
            let (kind, arg) = other.split_once(':')?;
            let k = size(arg)?;
            match kind {
                "complete" if k >= 2 => Some(LabeledGraph::complete(k)),
                "star" => Some(LabeledGraph::star(k)),
                "path" => Some(LabeledGraph::path(k)),
                _ => None,
            }
        }
    }
}

fn pattern_json(arg: &str) -> Result<GraphJson> {
    if let Some(g) = named_pattern(arg) {
        return Ok(GraphJson::from(&g));
    }
    Ok(serde_json::from_str(&read_arg(arg)?)?)
}

fn pattern(arg: &str) -> Result<LabeledGraph> {
    pattern_json(arg)?.to_graph()
}

fn kernel(arg: &str, m: usize) -> Result<Graphon> {
    read_arg(arg)?.parse::<KernelSpec>()?.step_graphon(m)
}

fn list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(f64::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Density(args) => {
            let f = pattern_json(&args.pattern)?;
            let w = kernel(&args.kernel, args.m)?;
            let t: f64 = if f.is_multigraph() {
                hom_density(&f.to_multigraph()?, &w)?
            } else {
                hom_density(&f.to_graph()?, &w)?
            };
            println!("{t}");
        }
        Command::Regularity { input, tol } => {
            let h = pattern(&input.pattern)?;
            let reg = regularity(&h, &kernel(&input.kernel, input.m)?, tol)?;
            println!("defect = {}", reg.defect);
            println!("tolerance = {tol}");
            println!(
                "verdict = {}",
                if reg.regular { "regular" } else { "not regular" }
            );
        }
        Command::Constants { input, tol } => {
            let h = pattern(&input.pattern)?;
            let c = limit_constants(&h, &kernel(&input.kernel, input.m)?, tol)?;
            println!("branch = {}", if c.regular { "mixture" } else { "gaussian" });
            println!("density = {}", c.density);
            println!("regularity_defect = {}", c.regularity_defect);
            println!("tau2 = {}", c.tau2);
            println!("sigma2 = {}", c.sigma2);
            println!("dwh = {}", c.dwh);
            println!("spectrum = {}", list(&c.spectrum));
            match &c.spec_minus {
                Some(rest) => println!("spec_minus = {}", list(rest)),
                None => println!("spec_minus = none (not H-regular)"),
            }
        }
        Command::Spectrum {
            pattern: p,
            kernel: k,
            m,
        } => {
            let w = kernel(&k, m)?;
            let target = match p {
                Some(p) => two_point_graphon(&pattern(&p)?, &w)?,
                None => w,
            };
            println!("{}", serde_json::to_string_pretty(&spectrum(&target)?.to_json())?);
        }
        Command::Simulate { config, out } => {
            let cfg = ExperimentConfig::from_json(&fs::read_to_string(&config)?)?;
            let res = run_experiment(&cfg)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("result.json"), serde_json::to_string_pretty(&res)?)?;
            write_replicates_csv(&res.records, fs::File::create(out.join("replicates.csv"))?)?;
            println!(
                "branch = {}",
                if res.limit_law.is_gaussian() {
                    "gaussian"
                } else {
                    "mixture"
                }
            );
            println!("limit_variance = {}", res.limit_variance);
            println!("empirical_variance = {}", res.empirical.variance);
            println!(
                "ks_distance = {} (threshold {})",
                res.ks_distance, cfg.tolerances.ks_threshold
            );
            println!(
                "mean_count = {} (expected {})",
                res.raw_count.mean, res.raw_count.expected
            );
            println!("passed = {}", res.passed);
            if !res.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Selftest => {
            let checks = selftest::run();
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Degenerate(_) = e {
                eprintln!("the limit theorem excludes this input");
            }
            ExitCode::from(2)
        }
    }
}
