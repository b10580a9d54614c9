//! Local search with swaps of up to `p` centers.
//!
//! A swap closes `A′ ⊆ A` and opens `O′ ⊆ 𝒞∖A` with `|A′| = |O′| ≤ p`. The
//! search accepts the best swap only if it lowers the cost to at most
//! `(1 − δ/N)·cost(A)` with `N = |𝒟| + |𝒞|`, and stops otherwise.

use itertools::Itertools;
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::solution::open_cost;
use crate::{rng, ClusteringSolution, Error, KMedianInstance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Init {
    Greedy,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub m: usize,
    pub p: usize,
    pub delta: f64,
    pub max_iters: usize,
    pub init: Init,
}

impl SearchConfig {
    pub fn new(m: usize, p: usize) -> Self {
        Self { m, p, delta: 1e-3, max_iters: 10_000, init: Init::Greedy }
    }

    pub fn validate(&self, inst: &KMedianInstance) -> Result<()> {
        if self.m == 0 || self.m > inst.num_centers() {
            return Err(Error::Config(format!("m must lie in [1, {}], got {}", inst.num_centers(), self.m)));
        }
        if self.p == 0 || self.p > self.m {
            return Err(Error::Config(format!("p must lie in [1, m = {}], got {}", self.m, self.p)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    /// `1 − δ/N`.
    pub fn threshold_factor(&self, inst: &KMedianInstance) -> f64 {
        1.0 - self.delta / (inst.num_demands() + inst.num_centers()) as f64
    }
}

/// Greedy: repeatedly add the center that lowers the cost most (ties to the
/// smaller index). Random: a uniform `m`-subset.
pub fn initial_solution(inst: &KMedianInstance, m: usize, init: Init) -> Result<Vec<usize>> {
    let nc = inst.num_centers();
    if m == 0 || m > nc {
        return Err(Error::Config(format!("m must lie in [1, {nc}], got {m}")));
    }
    let mut chosen = match init {
        Init::Random { seed } => index::sample(&mut rng::from_seed(seed), nc, m).into_vec(),
        Init::Greedy => {
            let n = inst.num_demands();
            let mut best_d = vec![f64::INFINITY; n];
            let mut chosen = Vec::with_capacity(m);
            let mut is_open = vec![false; nc];
            for _ in 0..m {
                let mut pick: Option<(usize, f64)> = None;
                for c in (0..nc).filter(|&c| !is_open[c]) {
                    let cost: f64 = (0..n).map(|x| best_d[x].min(inst.distance(x, c))).sum();
                    if pick.is_none_or(|(_, b)| cost < b) {
                        pick = Some((c, cost));
                    }
                }
                let (c, _) = pick.expect("m ≤ |C| leaves a closed center");
                is_open[c] = true;
                chosen.push(c);
                for (x, d) in best_d.iter_mut().enumerate() {
                    *d = d.min(inst.distance(x, c));
                }
            }
            chosen
        }
    };
    chosen.sort_unstable();
    Ok(chosen)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Swap {
    pub close: Vec<usize>,
    pub open: Vec<usize>,
    pub new_cost: f64,
}

impl Swap {
    pub fn apply(&self, current: &[usize]) -> Vec<usize> {
        let mut next: Vec<usize> =
            current.iter().copied().filter(|c| !self.close.contains(c)).chain(self.open.iter().copied()).collect();
        next.sort_unstable();
        next
    }
}

/// Nearest and second-nearest open distances per demand.
fn nearest_two(inst: &KMedianInstance, current: &[usize]) -> Vec<(usize, f64, f64)> {
    (0..inst.num_demands())
        .map(|x| {
            let (mut c1, mut d1, mut d2) = (usize::MAX, f64::INFINITY, f64::INFINITY);
            for &c in current {
                let d = inst.distance(x, c);
                if d < d1 {
                    d2 = d1;
                    d1 = d;
                    c1 = c;
                } else if d < d2 {
                    d2 = d;
                }
            }
            (c1, d1, d2)
        })
        .collect()
}

/// The cheapest swap of size `1..=p`, enumerated by size and then
/// lexicographically; returns `None` unless it costs at most
/// `factor·cost(current)` and strictly less than `cost(current)`.
pub fn best_swap(inst: &KMedianInstance, current: &[usize], p: usize, factor: f64) -> Option<Swap> {
    let current_cost = open_cost(inst, current);
    let closed: Vec<usize> = (0..inst.num_centers()).filter(|c| !current.contains(c)).collect();
    let mut best: Option<Swap> = None;
    let mut consider = |close: Vec<usize>, open: Vec<usize>, cost: f64| {
        if best.as_ref().is_none_or(|b| cost < b.new_cost) {
            best = Some(Swap { close, open, new_cost: cost });
        }
    };

    if p >= 1 {
        let near = nearest_two(inst, current);
        for &a in current {
            for &o in &closed {
                let cost: f64 = near
                    .iter()
                    .enumerate()
                    .map(|(x, &(c1, d1, d2))| {
                        let keep = if c1 == a { d2 } else { d1 };
                        keep.min(inst.distance(x, o))
                    })
                    .sum();
                consider(vec![a], vec![o], cost);
            }
        }
    }
    for s in 2..=p.min(current.len()).min(closed.len()) {
        for close in current.iter().copied().combinations(s) {
            let kept: Vec<usize> = current.iter().copied().filter(|c| !close.contains(c)).collect();
            for open in closed.iter().copied().combinations(s) {
                let cost: f64 = (0..inst.num_demands())
                    .map(|x| {
                        kept.iter()
                            .chain(open.iter())
                            .map(|&c| inst.distance(x, c))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .sum();
                consider(close.clone(), open, cost);
            }
        }
    }
    best.filter(|b| b.new_cost < current_cost && b.new_cost <= factor * current_cost)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapStep {
    pub close: Vec<usize>,
    pub open: Vec<usize>,
    pub old_cost: f64,
    pub new_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub config: SearchConfig,
    pub threshold_factor: f64,
    pub initial: Vec<usize>,
    pub initial_cost: f64,
    pub iterations: Vec<SwapStep>,
    #[serde(rename = "final")]
    pub final_solution: ClusteringSolution,
    pub converged: bool,
}

pub fn run_local_search(inst: &KMedianInstance, cfg: &SearchConfig) -> Result<SearchTrace> {
    cfg.validate(inst)?;
    let initial = initial_solution(inst, cfg.m, cfg.init)?;
    run_local_search_from(inst, cfg, initial)
}

/// Same as [`run_local_search`] from a given starting set.
pub fn run_local_search_from(inst: &KMedianInstance, cfg: &SearchConfig, mut initial: Vec<usize>) -> Result<SearchTrace> {
    cfg.validate(inst)?;
    initial.sort_unstable();
    initial.dedup();
    if initial.len() != cfg.m || initial.iter().any(|&c| c >= inst.num_centers()) {
        return Err(Error::Config(format!("initial set must hold {} distinct valid centers", cfg.m)));
    }
    let factor = cfg.threshold_factor(inst);
    let initial_cost = open_cost(inst, &initial);
    let mut current = initial.clone();
    let mut cost = initial_cost;
    let mut steps = Vec::new();
    let mut converged = false;
    while steps.len() < cfg.max_iters {
        match best_swap(inst, &current, cfg.p, factor) {
            Some(swap) => {
                current = swap.apply(&current);
                steps.push(SwapStep {
                    close: swap.close,
                    open: swap.open,
                    old_cost: cost,
                    new_cost: swap.new_cost,
                });
                cost = swap.new_cost;
            }
            None => {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        converged = best_swap(inst, &current, cfg.p, factor).is_none();
    }
    let final_solution = ClusteringSolution::evaluate(inst, &current)?;
    Ok(SearchTrace {
        config: *cfg,
        threshold_factor: factor,
        initial,
        initial_cost,
        iterations: steps,
        final_solution,
        converged,
    })
}
