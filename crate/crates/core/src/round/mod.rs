//! Randomized rounding of a normalized LP solution onto `m = βk` centers.
//!
//! Every demand gets a ball of the nearest `1/β` copy mass. Demands are
//! visited by ascending LP radius; a ball disjoint from all balls chosen so
//! far is chosen, otherwise the demand's witness is the earliest chosen ball
//! it meets. The chosen balls plus the leftover mass cut into pieces of
//! `1/β` form `m` groups, and one copy is drawn from each group with
//! probability `β·share`.

pub mod balls;
pub mod groups;
pub mod sample;
pub mod trials;

use serde::Serialize;

pub use balls::{build_balls_and_witnesses, markov_radius_check, Ball, MarkovReport, WitnessMap};
pub use groups::{build_partition, Group, GroupKind, GroupPartition};
pub use sample::{sample_solution, Sample};
pub use trials::{cost_ratio, round_many, TrialRecord, TrialStats};

use crate::lp::FractionalSolution;
use crate::{ClusteringSolution, Error, KMedianInstance, Result};

/// `k` from the LP and the number `m = βk` of centers to open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Openings {
    pub k: usize,
    pub m: usize,
}

impl Openings {
    /// Rejects `β·k` that is not an integer (to within `1e-9`).
    pub fn from_beta(k: usize, beta: f64) -> Result<Self> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::Config(format!("beta must exceed 1, got {beta}")));
        }
        let prod = beta * k as f64;
        let m = prod.round();
        if (prod - m).abs() > 1e-9 * prod.max(1.0) {
            return Err(Error::Config(format!("β·k = {beta}·{k} = {prod} is not an integer; pass m instead")));
        }
        Self::from_m(k, m as usize)
    }

    pub fn from_m(k: usize, m: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if m <= k {
            return Err(Error::Config(format!("m = {m} must exceed k = {k}")));
        }
        Ok(Self { k, m })
    }

    /// `β = m/k`.
    pub fn beta(&self) -> f64 {
        self.m as f64 / self.k as f64
    }

    /// `1/β = k/m`.
    pub fn group_mass(&self) -> f64 {
        self.k as f64 / self.m as f64
    }
}

/// Everything the sampler needs, built once per LP solution.
#[derive(Debug, Clone)]
pub struct RoundingPlan {
    pub openings: Openings,
    pub solution: FractionalSolution,
    pub balls: Vec<Ball>,
    pub witnesses: WitnessMap,
    pub markov: MarkovReport,
    pub partition: GroupPartition,
}

impl RoundingPlan {
    pub fn new(inst: &KMedianInstance, solution: FractionalSolution, openings: Openings) -> Result<Self> {
        let (balls, witnesses) = build_balls_and_witnesses(inst, &solution, &openings)?;
        let markov = markov_radius_check(&solution, &balls, openings.beta())?;
        let partition = build_partition(&solution, &balls, &witnesses, &openings)?;
        Ok(Self { openings, solution, balls, witnesses, markov, partition })
    }

    pub fn diagnostics(&self) -> Vec<DemandDiagnostics> {
        (0..self.solution.num_demands())
            .map(|x| DemandDiagnostics {
                demand: x,
                r: self.solution.radii[x],
                r_beta: self.balls[x].radius,
                witness: self.witnesses.witness[x],
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemandDiagnostics {
    pub demand: usize,
    pub r: f64,
    pub r_beta: f64,
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingReport {
    pub solution: ClusteringSolution,
    pub lp_value: f64,
    pub ratio: f64,
    pub diagnostics: Vec<DemandDiagnostics>,
}

/// One draw with diagnostics.
pub fn round_once(plan: &RoundingPlan, inst: &KMedianInstance, seed: u64) -> Result<RoundingReport> {
    let mut r = crate::rng::substream(seed, 0);
    let s = sample_solution(&plan.partition, &plan.solution, inst, &mut r)?;
    let lp_value = plan.solution.lp_value;
    Ok(RoundingReport {
        ratio: cost_ratio(s.solution.total_cost, lp_value),
        solution: s.solution,
        lp_value,
        diagnostics: plan.diagnostics(),
    })
}
