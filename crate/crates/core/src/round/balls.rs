use serde::Serialize;

use super::Openings;
use crate::lp::FractionalSolution;
use crate::{Error, KMedianInstance, Result};

/// The nearest `1/β` of copy mass around a demand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub owner: usize,
    /// `(copy id, claimed weight)` in order of distance, ties by copy id.
    pub copies: Vec<(usize, f64)>,
    /// `R_x^β`: distance of the farthest claimed copy.
    pub radius: f64,
}

impl Ball {
    pub fn mass(&self) -> f64 {
        self.copies.iter().map(|c| c.1).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessMap {
    /// Demand → owner of its witness ball.
    pub witness: Vec<usize>,
    /// Owners of the chosen disjoint balls, in processing order.
    pub selected: Vec<usize>,
    /// Demands sorted by ascending `R_x`, ties by index.
    pub order: Vec<usize>,
}

pub fn build_ball(inst: &KMedianInstance, sol: &FractionalSolution, x: usize, mass: f64) -> Ball {
    let mut ids: Vec<(f64, usize)> = (0..sol.copies.len()).map(|c| (sol.distance(inst, x, c), c)).collect();
    ids.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut remaining = mass;
    let mut copies = Vec::new();
    let mut radius = 0.0;
    for (d, c) in ids {
        if remaining <= 0.0 {
            break;
        }
        let w = sol.copies[c].weight;
        if w <= 0.0 {
            continue;
        }
        let take = w.min(remaining);
        copies.push((c, take));
        radius = d;
        remaining -= take;
        // absorb rounding drift so the ball does not reach for a sliver of
        // the next copy
        if remaining <= 1e-14 * mass {
            if let Some(last) = copies.last_mut() {
                last.1 += remaining;
            }
            remaining = 0.0;
        }
    }
    Ball { owner: x, copies, radius }
}

/// Builds every ball and selects the witnesses in ascending `R_x` order.
pub fn build_balls_and_witnesses(
    inst: &KMedianInstance,
    sol: &FractionalSolution,
    openings: &Openings,
) -> Result<(Vec<Ball>, WitnessMap)> {
    if inst.num_demands() != sol.num_demands() {
        return Err(Error::InvalidInstance(format!(
            "solution covers {} demands, instance has {}",
            sol.num_demands(),
            inst.num_demands()
        )));
    }
    if sol.k != openings.k {
        return Err(Error::Config(format!("solution opens k={}, openings use k={}", sol.k, openings.k)));
    }
    let mass = openings.group_mass();
    let n = sol.num_demands();
    let balls: Vec<Ball> = (0..n).map(|x| build_ball(inst, sol, x, mass)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sol.radii[a].total_cmp(&sol.radii[b]).then(a.cmp(&b)));

    // copy id → owner of the chosen ball claiming it
    let mut registry: Vec<Option<usize>> = vec![None; sol.copies.len()];
    let mut rank = vec![usize::MAX; n];
    let mut witness = vec![usize::MAX; n];
    let mut selected = Vec::new();
    for &x in &order {
        let hit = balls[x]
            .copies
            .iter()
            .filter_map(|&(c, w)| if w > 0.0 { registry[c] } else { None })
            .min_by_key(|&owner| rank[owner]);
        match hit {
            Some(owner) => witness[x] = owner,
            None => {
                witness[x] = x;
                rank[x] = selected.len();
                selected.push(x);
                for &(c, _) in &balls[x].copies {
                    registry[c] = Some(x);
                }
            }
        }
    }
    Ok((balls, WitnessMap { witness, selected, order }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkovReport {
    /// Smallest `βR_x/(β−1) − R_x^β` over all demands.
    pub min_slack: f64,
    pub max_slack: f64,
}

/// Checks `R_x^β ≤ β·R_x/(β−1) + 1e-9` for every demand.
pub fn markov_radius_check(sol: &FractionalSolution, balls: &[Ball], beta: f64) -> Result<MarkovReport> {
    let mut report = MarkovReport { min_slack: f64::INFINITY, max_slack: f64::NEG_INFINITY };
    for ball in balls {
        let x = ball.owner;
        let bound = beta * sol.radii[x] / (beta - 1.0);
        let slack = bound - ball.radius;
        if slack < -1e-9 {
            return Err(Error::Invariant(format!(
                "demand {x}: ball radius {} exceeds β·R_x/(β−1) = {bound}",
                ball.radius
            )));
        }
        report.min_slack = report.min_slack.min(slack);
        report.max_slack = report.max_slack.max(slack);
    }
    Ok(report)
}
