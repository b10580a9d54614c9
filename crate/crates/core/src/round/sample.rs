use rand::Rng as _;

use super::groups::GroupPartition;
use crate::lp::FractionalSolution;
use crate::{ClusteringSolution, KMedianInstance, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub solution: ClusteringSolution,
    /// The copy drawn from each group, in group order.
    pub selections: Vec<usize>,
}

/// Index of the share drawn from a group, with probability proportional to
/// its weight (`β·share` once the group mass is exactly `1/β`).
pub fn draw_share(shares: &[(usize, f64)], rng: &mut crate::rng::Rng) -> usize {
    let total: f64 = shares.iter().map(|s| s.1).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, s) in shares.iter().enumerate() {
        acc += s.1;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap at the top; take the last positive share
    shares.iter().rposition(|s| s.1 > 0.0).unwrap_or(0)
}

/// Draws one copy per group and opens the distinct original centers.
pub fn sample_solution(
    partition: &GroupPartition,
    sol: &FractionalSolution,
    inst: &KMedianInstance,
    rng: &mut crate::rng::Rng,
) -> Result<Sample> {
    let selections: Vec<usize> = partition.groups.iter().map(|g| g.shares[draw_share(&g.shares, rng)].0).collect();
    let opened: Vec<usize> = selections.iter().map(|&c| sol.copies[c].center).collect();
    let solution = ClusteringSolution::evaluate(inst, &opened)?;
    Ok(Sample { solution, selections })
}
