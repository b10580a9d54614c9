use serde::{Deserialize, Serialize};

use crate::{Error, KMedianInstance, Partition, Result};

/// A set of opened centers with the induced nearest-center assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSolution {
    /// Opened center indices, ascending and distinct.
    pub opened: Vec<usize>,
    /// Demand index → opened center index.
    pub assignment: Vec<usize>,
    pub per_point_cost: Vec<f64>,
    pub total_cost: f64,
}

impl ClusteringSolution {
    /// Assigns every demand to its nearest opened center, ties to the
    /// smallest center index.
    pub fn evaluate(inst: &KMedianInstance, opened: &[usize]) -> Result<Self> {
        let mut opened = opened.to_vec();
        opened.sort_unstable();
        opened.dedup();
        if opened.is_empty() {
            return Err(Error::Config("at least one center must be opened".into()));
        }
        if let Some(&c) = opened.iter().find(|&&c| c >= inst.num_centers()) {
            return Err(Error::Config(format!("center {c} out of range")));
        }
        let n = inst.num_demands();
        let mut assignment = Vec::with_capacity(n);
        let mut per_point_cost = Vec::with_capacity(n);
        for x in 0..n {
            let (c, d) = inst.nearest(x, &opened);
            assignment.push(c);
            per_point_cost.push(d);
        }
        let total_cost = per_point_cost.iter().sum();
        Ok(Self { opened, assignment, per_point_cost, total_cost })
    }

    /// The induced partition of the demands (clusters ordered by center).
    pub fn partition(&self) -> Result<Partition> {
        let clusters: Vec<Vec<usize>> = self
            .opened
            .iter()
            .map(|&c| (0..self.assignment.len()).filter(|&x| self.assignment[x] == c).collect())
            .filter(|cl: &Vec<usize>| !cl.is_empty())
            .collect();
        Partition::new(clusters, self.assignment.len())
    }
}

/// Total cost of opening `opened`; no allocation of per-point data.
pub fn open_cost(inst: &KMedianInstance, opened: &[usize]) -> f64 {
    (0..inst.num_demands()).map(|x| inst.nearest(x, opened).1).sum()
}
