use rayon::prelude::*;
use serde::Serialize;

use super::sample::sample_solution;
use super::RoundingPlan;
use crate::{rng, Error, KMedianInstance, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub cost: f64,
    pub ratio: f64,
    pub opened: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: usize,
    pub lp_value: f64,
    pub mean_cost: f64,
    pub mean_ratio: f64,
    /// Sample standard deviation of the ratio (`n − 1` denominator).
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub records: Vec<TrialRecord>,
}

/// `cost / lp_value`, or `0` when both vanish.
pub fn cost_ratio(cost: f64, lp_value: f64) -> f64 {
    if lp_value > 0.0 {
        cost / lp_value
    } else if cost == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Runs `trials` independent draws; trial `i` uses substream `i` of `seed`,
/// so the output does not depend on `jobs`.
pub fn round_many(
    plan: &RoundingPlan,
    inst: &KMedianInstance,
    trials: usize,
    seed: u64,
    jobs: usize,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let lp_value = plan.solution.lp_value;
    let run = |t: usize| -> Result<TrialRecord> {
        let mut r = rng::substream(seed, t as u64);
        let s = sample_solution(&plan.partition, &plan.solution, inst, &mut r)?;
        let cost = s.solution.total_cost;
        Ok(TrialRecord { trial: t, cost, ratio: cost_ratio(cost, lp_value), opened: s.solution.opened.len() })
    };
    let records: Vec<TrialRecord> = if jobs <= 1 {
        (0..trials).map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| (0..trials).into_par_iter().map(run).collect::<Result<_>>())?
    };

    let count = records.len() as f64;
    let mean_cost = records.iter().map(|r| r.cost).sum::<f64>() / count;
    let mean_ratio = records.iter().map(|r| r.ratio).sum::<f64>() / count;
    let std = if records.len() > 1 {
        (records.iter().map(|r| (r.ratio - mean_ratio).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    let min = records.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = records.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(TrialStats { trials, lp_value, mean_cost, mean_ratio, std, min, max, records })
}
