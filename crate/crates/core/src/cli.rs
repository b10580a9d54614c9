//! Command-line interface.
//!
//! Exit codes: `0` on success, `1` on domain errors (bad input data, solver
//! failures, failing benchmark rows), `2` on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{self, ExperimentSpec, Generator};
use crate::io::{self, LpSolutionFile};
use crate::local::{run_local_search, Init, SearchConfig};
use crate::lp::{normalize, solve_lp, LpOptions};
use crate::reduce::{build_instance, CentroidStrategy, ReductionConfig};
use crate::round::{round_many, round_once, Openings, RoundingPlan};
use crate::{bounds, oracle, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "bikmeans", version, about = "Bi-criteria k-means via discrete k-median", arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a point cloud as headerless CSV.
    Gen(GenArgs),
    /// Reduce a k-means point set to a discrete k-median instance.
    Reduce(ReduceArgs),
    /// Solve and normalize the k-median LP relaxation.
    Lp(LpArgs),
    /// Round a normalized LP solution onto m = βk centers.
    Round(RoundArgs),
    /// Run p-swap local search for m centers.
    Localsearch(LocalArgs),
    /// Evaluate the approximation bounds as functions of β.
    Bounds(BoundsArgs),
    /// Brute-force ground truth on tiny inputs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run an experiment described by a TOML or JSON spec.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeneratorKind {
    GaussianMixture,
    UniformCube,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value = "gaussian-mixture")]
    pub generator: GeneratorKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub true_k: usize,
    #[arg(long, default_value_t = 10.0)]
    pub separation: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Input points (headerless CSV).
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Centroid-set construction: auto, grid or subsets.
    #[arg(long, default_value = "auto")]
    pub strategy: CentroidStrategy,
    #[arg(long, default_value_t = 200_000)]
    pub centroid_cap: usize,
    #[arg(long, default_value_t = 4096)]
    pub target_dim_cap: usize,
    /// Where to write the instance JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_iters: usize,
    /// Where to write the solution JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RoundArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Overprovisioning factor; β·k must be an integer.
    #[arg(long, conflicts_with = "m", required_unless_present = "m")]
    pub beta: Option<f64>,
    /// Number of centers to open; β = m/k.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Report JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-trial CSV (trial, cost, ratio).
    #[arg(long)]
    pub trials_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitKind {
    Greedy,
    Random,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, value_enum, default_value = "greedy")]
    pub init: InitKind,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Seed for random initialization.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Final solution JSON.
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Single β.
    #[arg(long, conflicts_with_all = ["beta_min", "beta_max"])]
    pub beta: Option<f64>,
    /// Start of a β range (CSV output).
    #[arg(long, requires = "beta_max")]
    pub beta_min: Option<f64>,
    #[arg(long, requires = "beta_min")]
    pub beta_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Swap sizes for the local-search column(s).
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub p: Vec<u64>,
    /// Also print the closed form with the sign exactly as published.
    #[arg(long)]
    pub as_printed: bool,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact k-means optimum of a CSV point set.
    Kmeans {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Exact discrete k-median optimum of an instance JSON.
    Kmedian {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check the approximate centroid-set property by subset enumeration.
    CentroidSet {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Experiment spec (.toml or .json).
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory for report.csv, summary.json, instances/ and solutions/.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let d = Diagnostic { error: e.kind(), message: e.to_string() };
            let _ = writeln!(err, "{}", serde_json::to_string(&d).unwrap_or_else(|_| e.to_string()));
            1
        }
    }
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => io::write_json(p, value),
        None => Ok(out.write_all(io::to_json_string(value)?.as_bytes())?),
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen(a) => {
            let gen = match a.generator {
                GeneratorKind::GaussianMixture => {
                    Generator::GaussianMixture { n: a.n, p: a.p, true_k: a.true_k, separation: a.separation }
                }
                GeneratorKind::UniformCube => Generator::UniformCube { n: a.n, p: a.p },
            };
            let x = bench::generate(&gen, a.seed)?;
            match a.out {
                Some(path) => io::write_points_csv(std::fs::File::create(path)?, &x)?,
                None => io::write_points_csv(&mut *out, &x)?,
            }
        }
        Command::Reduce(a) => {
            let x = io::read_points_csv(&a.points)?;
            let cfg = ReductionConfig {
                seed: a.seed,
                strategy: a.strategy,
                centroid_cap: a.centroid_cap,
                target_dim_cap: a.target_dim_cap,
                ..ReductionConfig::new(a.epsilon)
            };
            let r = build_instance(&x, &cfg)?;
            io::write_instance(&a.out, &r.instance)?;
            emit_json(&r.report(&x, &cfg), None, out)?;
        }
        Command::Lp(a) => {
            let inst = io::read_instance(&a.instance)?;
            let opts = LpOptions { tol: a.tol, max_iters: a.max_iters, ..LpOptions::default() };
            let raw = solve_lp(&inst, a.k, &opts)?;
            let sol = normalize(&inst, &raw);
            io::write_json(&a.out, &LpSolutionFile::from_solution(&sol))?;
            writeln!(out, "{}", sol.lp_value)?;
        }
        Command::Round(a) => {
            let inst = io::read_instance(&a.instance)?;
            let sol = io::read_json::<LpSolutionFile>(&a.solution)?.into_solution(&inst)?;
            let openings = match (a.beta, a.m) {
                (Some(b), _) => Openings::from_beta(sol.k, b)?,
                (None, Some(m)) => Openings::from_m(sol.k, m)?,
                (None, None) => return Err(Error::Config("one of --beta or --m is required".into())),
            };
            let plan = RoundingPlan::new(&inst, sol, openings)?;
            let stats = round_many(&plan, &inst, a.trials, a.seed, a.jobs)?;
            let first = round_once(&plan, &inst, a.seed)?;
            if let Some(path) = &a.trials_csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["trial", "cost", "ratio"])?;
                for r in &stats.records {
                    w.write_record([r.trial.to_string(), r.cost.to_string(), r.ratio.to_string()])?;
                }
                w.flush()?;
            }
            let report = RoundReport {
                schema: io::SCHEMA_VERSION,
                k: openings.k,
                m: openings.m,
                beta: openings.beta(),
                seed: a.seed,
                trials: stats.trials,
                lp_value: stats.lp_value,
                mean_cost: stats.mean_cost,
                mean_ratio: stats.mean_ratio,
                std: stats.std,
                min: stats.min,
                max: stats.max,
                bound: bounds::alpha_lp_tight(openings.beta())?.value,
                bound_version: bounds::VERSION,
                markov_min_slack: plan.markov.min_slack,
                witnesses: plan.witnesses.selected.len(),
                example: first,
            };
            emit_json(&report, a.out.as_deref(), out)?;
        }
        Command::Localsearch(a) => {
            let inst = io::read_instance(&a.instance)?;
            let init = match a.init {
                InitKind::Greedy => Init::Greedy,
                InitKind::Random => Init::Random { seed: a.seed },
            };
            let cfg = SearchConfig { m: a.m, p: a.p, delta: a.delta, max_iters: a.max_iters, init };
            let trace = run_local_search(&inst, &cfg)?;
            if let Some(path) = &a.solution_out {
                io::write_json(path, &trace.final_solution)?;
            }
            emit_json(&trace, a.out.as_deref(), out)?;
        }
        Command::Bounds(a) => bounds_command(&a, out)?,
        Command::Oracle(o) => match o {
            OracleCommand::Kmeans { points, k } => {
                let x = io::read_points_csv(&points)?;
                let best = oracle::brute_kmeans(&x, k)?;
                writeln!(out, "{}", best.opt_cost)?;
                emit_json(&best, None, out)?;
            }
            OracleCommand::Kmedian { instance, k } => {
                let inst = io::read_instance(&instance)?;
                let best = oracle::brute_kmedian(&inst, k)?;
                writeln!(out, "{}", best.opt_cost)?;
                emit_json(&best, None, out)?;
            }
            OracleCommand::CentroidSet { points, candidates, eps } => {
                let x = io::read_points_csv(&points)?;
                let c = io::read_points_csv(&candidates)?;
                let check = oracle::verify_centroid_set(&x, &c, eps)?;
                emit_json(&check, None, out)?;
                if !check.ok {
                    return Ok(1);
                }
            }
        },
        Command::Bench(a) => {
            let spec = ExperimentSpec::from_path(&a.spec)?;
            let report = bench::run_experiment(&spec, a.jobs)?;
            if let Some(dir) = &a.out {
                report.write_to(dir)?;
            }
            emit_json(&report.summary, None, out)?;
            if report.failed() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct RoundReport {
    schema: u32,
    k: usize,
    m: usize,
    beta: f64,
    seed: u64,
    trials: usize,
    lp_value: f64,
    mean_cost: f64,
    mean_ratio: f64,
    std: f64,
    min: f64,
    max: f64,
    bound: f64,
    bound_version: &'static str,
    markov_min_slack: f64,
    witnesses: usize,
    example: crate::round::RoundingReport,
}

fn bounds_command(a: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(beta) = a.beta {
        let tight = bounds::alpha_lp_tight(beta)?;
        let env = bounds::alpha_envelope(beta)?;
        writeln!(out, "beta = {beta}")?;
        writeln!(out, "alpha_lp_tight = {}", tight.value)?;
        writeln!(out, "argmax_gamma = {}", tight.argmax_gamma)?;
        writeln!(out, "alpha_lp_closed = {}", bounds::alpha_lp_closed(beta)?)?;
        if a.as_printed {
            writeln!(out, "alpha_lp_as_printed = {}", bounds::alpha_lp_as_printed(beta)?)?;
        }
        for &p in &a.p {
            writeln!(out, "alpha_local[p={p}] = {}", bounds::alpha_local(beta, p, 0.0)?)?;
        }
        writeln!(out, "alpha_local_limit = {}", bounds::alpha_local_limit(beta)?)?;
        writeln!(out, "alpha_pipage = {}", bounds::alpha_pipage(beta)?)?;
        let name = serde_json::to_value(env.attained_by)?;
        writeln!(out, "alpha_envelope = {} ({})", env.value, name.as_str().unwrap_or(""))?;
        return Ok(());
    }
    let (lo, hi) = match (a.beta_min, a.beta_max) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => (1.1, 5.0),
    };
    if !(hi >= lo) || a.steps == 0 {
        return Err(Error::Config(format!("bad β range [{lo}, {hi}] with {} steps", a.steps)));
    }
    let mut header = vec!["beta".to_string(), "alpha_lp_closed".into(), "alpha_lp_tight".into()];
    header.extend(a.p.iter().map(|p| format!("alpha_local_p{p}")));
    header.push("alpha_pipage".into());
    if a.as_printed {
        header.push("alpha_lp_as_printed".into());
    }
    header.push("bound_version".into());
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(&header)?;
    for i in 0..=a.steps {
        let beta = if a.steps == 0 { lo } else { lo + (hi - lo) * i as f64 / a.steps as f64 };
        let row = bounds::bound_row(beta, &a.p)?;
        let mut rec = vec![beta.to_string(), row.alpha_lp_closed.to_string(), row.alpha_lp_tight.to_string()];
        rec.extend(row.alpha_local.iter().map(f64::to_string));
        rec.push(row.alpha_pipage.to_string());
        if a.as_printed {
            rec.push(row.alpha_lp_as_printed.to_string());
        }
        rec.push(bounds::VERSION.into());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
