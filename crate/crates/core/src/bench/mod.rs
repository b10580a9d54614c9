//! Experiment harness: generate point clouds, run the pipelines, compare
//! against the oracles and the bound calculators, and write reports.

pub mod baseline;
pub mod generate;

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use baseline::{kmeanspp_baseline, SeedingResult};
pub use generate::{generate, generate_labeled, Generator};

use crate::lp::{normalize, solve_lp, LpOptions};
use crate::local::{run_local_search, Init, SearchConfig};
use crate::oracle::{brute_kmeans, brute_kmedian, MAX_KMEANS_POINTS};
use crate::reduce::{build_instance, ReductionConfig};
use crate::round::{round_many, Openings, RoundingPlan};
use crate::{bounds, io, Error, KMedianInstance, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LpRound,
    LocalSearch,
    KmeansppBaseline,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LpRound => "lp-round",
            Algorithm::LocalSearch => "local-search",
            Algorithm::KmeansppBaseline => "kmeanspp-baseline",
        }
    }
}

fn default_trials() -> usize {
    100
}
fn default_p_swap() -> usize {
    1
}
fn default_epsilon() -> f64 {
    0.45
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::LpRound, Algorithm::LocalSearch, Algorithm::KmeansppBaseline]
}
fn default_slack() -> f64 {
    1.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: String,
    pub generator: Generator,
    pub k: usize,
    /// Either `beta` (with `β·k` integral) or `m`.
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_p_swap")]
    pub p_swap: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// One instance per seed.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// Multiplier on the local-search bound absorbing the `(1 − O(ε))⁻¹`
    /// factor.
    #[serde(default = "default_slack")]
    pub local_slack: f64,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads TOML or JSON depending on the extension (`.json` → JSON).
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn openings(&self) -> Result<Openings> {
        match (self.beta, self.m) {
            (Some(b), None) => Openings::from_beta(self.k, b),
            (None, Some(m)) => Openings::from_m(self.k, m),
            (Some(b), Some(m)) => {
                let o = Openings::from_m(self.k, m)?;
                if (o.beta() - b).abs() > 1e-9 {
                    return Err(Error::Config(format!("beta = {b} disagrees with m/k = {}", o.beta())));
                }
                Ok(o)
            }
            (None, None) => Err(Error::Config("one of beta or m is required".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.p_swap == 0 {
            return Err(Error::Config("p_swap must be at least 1".into()));
        }
        if !(self.local_slack >= 1.0) {
            return Err(Error::Config("local_slack must be at least 1".into()));
        }
        ReductionConfig::new(self.epsilon).validate()?;
        self.openings()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// No bound applies (baseline rows, or no reference value available).
    Info,
    Error,
}

/// One line of `report.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: usize,
    pub seed: u64,
    pub algorithm: String,
    pub n: usize,
    pub p: usize,
    pub num_centers: Option<usize>,
    pub k: usize,
    pub m: usize,
    pub beta: f64,
    pub lp_value: Option<f64>,
    pub opt_kmedian: Option<f64>,
    pub opt_kmeans: Option<f64>,
    pub mean_cost: Option<f64>,
    /// Cost over the reference the bound is stated against.
    pub ratio: Option<f64>,
    pub ratio_std: Option<f64>,
    pub bound: Option<f64>,
    /// Allowed value of `ratio`: the bound plus any Monte-Carlo or slack allowance.
    pub threshold: Option<f64>,
    pub bound_name: String,
    pub bound_version: String,
    pub status: Status,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: u32,
    pub name: String,
    pub bound_version: String,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub info: usize,
    pub spec: ExperimentSpec,
}

#[derive(Debug, Clone)]
pub struct InstanceArtifacts {
    pub index: usize,
    pub instance: Option<KMedianInstance>,
    pub lp_solution: Option<io::LpSolutionFile>,
    pub local_trace: Option<crate::local::SearchTrace>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
    pub artifacts: Vec<InstanceArtifacts>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.failed > 0 || self.summary.errors > 0
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Writes `report.csv`, `summary.json`, `instances/` and `solutions/`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("instances"))?;
        fs::create_dir_all(dir.join("solutions"))?;
        fs::write(dir.join("report.csv"), self.csv_string()?)?;
        io::write_json(&dir.join("summary.json"), &self.summary)?;
        for a in &self.artifacts {
            if let Some(inst) = &a.instance {
                io::write_instance(&dir.join("instances").join(format!("instance-{:03}.json", a.index)), inst)?;
            }
            if let Some(lp) = &a.lp_solution {
                io::write_json(&dir.join("solutions").join(format!("lp-{:03}.json", a.index)), lp)?;
            }
            if let Some(trace) = &a.local_trace {
                io::write_json(&dir.join("solutions").join(format!("local-{:03}.json", a.index)), trace)?;
            }
        }
        Ok(())
    }
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    openings: Openings,
    index: usize,
    seed: u64,
    x: &'a PointSet,
}

fn base_row(spec: &ExperimentSpec, openings: Openings, index: usize, seed: u64, algorithm: Algorithm) -> ReportRow {
    ReportRow {
        instance: index,
        seed,
        algorithm: algorithm.name().into(),
        n: 0,
        p: 0,
        num_centers: None,
        k: spec.k,
        m: openings.m,
        beta: openings.beta(),
        lp_value: None,
        opt_kmedian: None,
        opt_kmeans: None,
        mean_cost: None,
        ratio: None,
        ratio_std: None,
        bound: None,
        threshold: None,
        bound_name: String::new(),
        bound_version: bounds::VERSION.into(),
        status: Status::Info,
        message: String::new(),
    }
}

impl Context<'_> {
    fn row(&self, algorithm: Algorithm) -> ReportRow {
        ReportRow {
            n: self.x.len(),
            p: self.x.dim(),
            ..base_row(self.spec, self.openings, self.index, self.seed, algorithm)
        }
    }
}

fn error_row(mut row: ReportRow, stage: &str, e: &Error) -> ReportRow {
    row.status = Status::Error;
    row.message = format!("{stage}: {e}");
    row
}

fn judge(row: &mut ReportRow) {
    row.status = match (row.ratio, row.threshold) {
        (Some(r), Some(t)) if r <= t => Status::Pass,
        (Some(_), Some(_)) => Status::Fail,
        _ => Status::Info,
    };
}

fn run_instance(spec: &ExperimentSpec, openings: Openings, index: usize, seed: u64) -> (Vec<ReportRow>, InstanceArtifacts) {
    let mut artifacts = InstanceArtifacts { index, instance: None, lp_solution: None, local_trace: None };
    let x = match generate(&spec.generator, seed) {
        Ok(x) => x,
        Err(e) => {
            let rows = spec
                .algorithms
                .iter()
                .map(|&a| error_row(base_row(spec, openings, index, seed, a), "generate", &e))
                .collect();
            return (rows, artifacts);
        }
    };
    let ctx = Context { spec, openings, index, seed, x: &x };
    let opt_kmeans =
        if x.len() <= MAX_KMEANS_POINTS { brute_kmeans(&x, spec.k).ok().map(|o| o.opt_cost) } else { None };

    let needs_instance = spec.algorithms.iter().any(|a| *a != Algorithm::KmeansppBaseline);
    let reduced = if needs_instance {
        let mut cfg = ReductionConfig::new(spec.epsilon);
        cfg.seed = seed;
        Some(build_instance(&x, &cfg))
    } else {
        None
    };
    let inst = match &reduced {
        Some(Ok(r)) => Some(&r.instance),
        _ => None,
    };
    artifacts.instance = inst.cloned();
    let opt_kmedian = inst.and_then(|i| brute_kmedian(i, spec.k).ok().map(|o| o.opt_cost));

    let mut rows = Vec::new();
    for &alg in &spec.algorithms {
        let mut row = ctx.row(alg);
        row.opt_kmeans = opt_kmeans;
        row.opt_kmedian = opt_kmedian;
        row.num_centers = inst.map(KMedianInstance::num_centers);
        if alg != Algorithm::KmeansppBaseline {
            if let Some(Err(e)) = &reduced {
                rows.push(error_row(row, "reduce", e));
                continue;
            }
        }
        let row = match alg {
            Algorithm::LpRound => lp_round_row(row, inst.expect("reduced"), &ctx, &mut artifacts),
            Algorithm::LocalSearch => local_row(row, inst.expect("reduced"), &ctx, &mut artifacts),
            Algorithm::KmeansppBaseline => match kmeanspp_baseline(&x, openings.m.min(x.len()), seed) {
                Ok(s) => {
                    let mut row = row;
                    row.mean_cost = Some(s.cost);
                    row.ratio = opt_kmeans.map(|o| crate::round::cost_ratio(s.cost, o));
                    row.bound_name = "none".into();
                    row
                }
                Err(e) => error_row(row, "kmeanspp", &e),
            },
        };
        rows.push(row);
    }
    (rows, artifacts)
}

fn lp_round_row(mut row: ReportRow, inst: &KMedianInstance, ctx: &Context, art: &mut InstanceArtifacts) -> ReportRow {
    let raw = match solve_lp(inst, ctx.spec.k, &LpOptions::default()) {
        Ok(r) => r,
        Err(e) => return error_row(row, "lp", &e),
    };
    let sol = normalize(inst, &raw);
    row.lp_value = Some(sol.lp_value);
    art.lp_solution = Some(io::LpSolutionFile::from_solution(&sol));
    let plan = match RoundingPlan::new(inst, sol, ctx.openings) {
        Ok(p) => p,
        Err(e) => return error_row(row, "round", &e),
    };
    let stats = match round_many(&plan, inst, ctx.spec.trials, ctx.seed, 1) {
        Ok(s) => s,
        Err(e) => return error_row(row, "round", &e),
    };
    row.mean_cost = Some(stats.mean_cost);
    row.ratio = Some(stats.mean_ratio);
    row.ratio_std = Some(stats.std);
    match bounds::alpha_lp_tight(ctx.openings.beta()) {
        Ok(b) => {
            row.bound = Some(b.value);
            row.bound_name = "alpha_lp_tight".into();
            row.threshold = Some(b.value + 3.0 * stats.std / (stats.trials as f64).sqrt());
            judge(&mut row);
        }
        Err(e) => return error_row(row, "bounds", &e),
    }
    row
}

fn local_row(mut row: ReportRow, inst: &KMedianInstance, ctx: &Context, art: &mut InstanceArtifacts) -> ReportRow {
    let m = ctx.openings.m;
    let cfg = SearchConfig { init: Init::Greedy, ..SearchConfig::new(m, ctx.spec.p_swap.min(m)) };
    let trace = match run_local_search(inst, &cfg) {
        Ok(t) => t,
        Err(e) => return error_row(row, "local", &e),
    };
    let cost = trace.final_solution.total_cost;
    row.mean_cost = Some(cost);
    art.local_trace = Some(trace);
    let bound = match bounds::alpha_local(ctx.openings.beta(), cfg.p as u64, 0.0) {
        Ok(b) => b,
        Err(e) => return error_row(row, "bounds", &e),
    };
    row.bound = Some(bound);
    row.bound_name = "alpha_local".into();
    if let Some(opt) = row.opt_kmedian {
        row.ratio = Some(crate::round::cost_ratio(cost, opt));
        row.threshold = Some(bound * ctx.spec.local_slack);
        judge(&mut row);
    } else {
        row.message = "no k-median optimum available; ratio not checked".into();
    }
    row
}

/// Runs every instance (in parallel when `jobs > 1`); row order follows the
/// seed list.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<Report> {
    spec.validate()?;
    let openings = spec.openings()?;
    let work = |(i, &seed): (usize, &u64)| run_instance(spec, openings, i, seed);
    let results: Vec<(Vec<ReportRow>, InstanceArtifacts)> = if jobs <= 1 {
        spec.seeds.iter().enumerate().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| spec.seeds.par_iter().enumerate().map(work).collect())
    };
    let mut rows = Vec::new();
    let mut artifacts = Vec::new();
    for (r, a) in results {
        rows.extend(r);
        artifacts.push(a);
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        schema: io::SCHEMA_VERSION,
        name: spec.name.clone(),
        bound_version: bounds::VERSION.into(),
        rows: rows.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        info: count(Status::Info),
        spec: spec.clone(),
    };
    Ok(Report { rows, summary, artifacts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec::from_toml(
            r#"
            name = "tiny"
            k = 2
            beta = 2.0
            p_swap = 2
            epsilon = 0.45
            trials = 50
            seeds = [0, 1]

            [generator]
            kind = "gaussian-mixture"
            n = 6
            p = 1
            true_k = 2
            separation = 6.0
            "#,
        )
        .unwrap()
    }

    #[test]
    fn spec_parsing_and_validation() {
        let spec = tiny_spec();
        assert_eq!(spec.openings().unwrap().m, 4);
        assert_eq!(spec.algorithms.len(), 3);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(ExperimentSpec::from_json(&json).unwrap(), spec);
        let bad = ExperimentSpec { beta: Some(1.5), k: 1, ..spec.clone() };
        assert!(bad.validate().is_err());
        assert!(ExperimentSpec::from_toml("k = 2\nbogus = 1\n[generator]\nkind = \"uniform-cube\"\nn = 3\np = 1\n").is_err());
    }

    #[test]
    fn tiny_run_is_deterministic_and_passes() {
        let spec = tiny_spec();
        let a = run_experiment(&spec, 1).unwrap();
        let b = run_experiment(&spec, 2).unwrap();
        assert_eq!(a.csv_string().unwrap(), b.csv_string().unwrap());
        assert_eq!(a.rows.len(), 6);
        for r in &a.rows {
            assert_ne!(r.status, Status::Error, "{r:?}");
            assert_ne!(r.status, Status::Fail, "{r:?}");
            assert_eq!(r.bound_version, bounds::VERSION);
        }
    }
}
