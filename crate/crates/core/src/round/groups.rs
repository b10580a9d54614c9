use serde::Serialize;

use super::balls::{Ball, WitnessMap};
use super::Openings;
use crate::lp::FractionalSolution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    WitnessBall { owner: usize },
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Group {
    pub kind: GroupKind,
    /// `(copy id, weight share)`.
    pub shares: Vec<(usize, f64)>,
}

impl Group {
    pub fn mass(&self) -> f64 {
        self.shares.iter().map(|s| s.1).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupPartition {
    pub groups: Vec<Group>,
    pub group_mass: f64,
}

/// Witness balls first, then the unclaimed mass in copy-id order cut into
/// groups of mass `1/β`.
pub fn build_partition(
    sol: &FractionalSolution,
    balls: &[Ball],
    witnesses: &WitnessMap,
    openings: &Openings,
) -> Result<GroupPartition> {
    let target = openings.group_mass();
    let mut remaining: Vec<f64> = sol.copies.iter().map(|c| c.weight).collect();
    let mut groups = Vec::with_capacity(openings.m);
    for &owner in &witnesses.selected {
        let ball = &balls[owner];
        for &(c, w) in &ball.copies {
            remaining[c] -= w;
        }
        groups.push(Group { kind: GroupKind::WitnessBall { owner }, shares: ball.copies.clone() });
    }

    let mut current: Vec<(usize, f64)> = Vec::new();
    let mut filled = 0.0;
    for (c, rest) in remaining.iter().enumerate() {
        let mut rest = *rest;
        while rest > 1e-15 {
            let take = rest.min(target - filled);
            current.push((c, take));
            filled += take;
            rest -= take;
            if filled >= target - 1e-12 {
                groups.push(Group { kind: GroupKind::Residual, shares: std::mem::take(&mut current) });
                filled = 0.0;
            }
            if rest <= 1e-12 * target {
                // leftover from rounding; fold into the share just taken
                if let Some(last) = current.last_mut().filter(|l| l.0 == c) {
                    last.1 += rest;
                    filled += rest;
                } else if let Some(last) = groups.last_mut().and_then(|g| g.shares.last_mut()).filter(|l| l.0 == c) {
                    last.1 += rest;
                }
                rest = 0.0;
            }
        }
    }
    if !current.is_empty() {
        if filled > 1e-7 {
            groups.push(Group { kind: GroupKind::Residual, shares: current });
        } else if let Some(last) = groups.last_mut() {
            last.shares.extend(current);
        }
    }

    if groups.len() != openings.m {
        return Err(Error::Numeric(format!("built {} groups, expected m = {}", groups.len(), openings.m)));
    }
    for (i, g) in groups.iter().enumerate() {
        let mass = g.mass();
        if (mass - target).abs() > 1e-7 {
            return Err(Error::Numeric(format!("group {i} has mass {mass}, expected {target}")));
        }
    }
    Ok(GroupPartition { groups, group_mass: target })
}
