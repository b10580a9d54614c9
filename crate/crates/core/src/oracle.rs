//! Exhaustive ground truth for tiny instances.
//!
//! These routines share nothing with the solvers beyond the cost
//! definitions: partitions are enumerated as restricted-growth strings,
//! center subsets and point subsets as bitmasks or lexicographic
//! combinations. Size guards are hard errors.

use serde::Serialize;

use crate::cost::cluster_cost_pairwise;
use crate::points::sq_dist;
use crate::{Error, KMedianInstance, Partition, PointSet, Result};

pub const MAX_KMEANS_POINTS: usize = 12;
pub const MAX_KMEDIAN_SUBSETS: u128 = 1_000_000;
pub const MAX_CENTROID_CHECK_POINTS: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct KMeansOptimum {
    pub opt_cost: f64,
    pub partition: Vec<Vec<usize>>,
}

/// Optimal k-means cost over all partitions into at most `k` clusters.
pub fn brute_kmeans(x: &PointSet, k: usize) -> Result<KMeansOptimum> {
    let n = x.len();
    if n > MAX_KMEANS_POINTS {
        return Err(Error::SizeGuard(format!(
            "brute-force k-means is limited to {MAX_KMEANS_POINTS} points, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let k = k.min(n);

    // Restricted-growth string: labels[0] = 0, labels[i] ≤ 1 + max(labels[..i]).
    let mut labels = vec![0usize; n];
    let mut best_cost = f64::INFINITY;
    let mut best_labels = labels.clone();
    let mut clusters: Vec<Vec<usize>> = Vec::with_capacity(k);
    loop {
        clusters.clear();
        for (i, &l) in labels.iter().enumerate() {
            if l == clusters.len() {
                clusters.push(Vec::new());
            }
            clusters[l].push(i);
        }
        let cost: f64 = clusters.iter().map(|cl| cluster_cost_pairwise(x, cl)).sum();
        if cost < best_cost {
            best_cost = cost;
            best_labels.clone_from(&labels);
        }
        if !next_rgs(&mut labels, k) {
            break;
        }
    }
    let partition = Partition::from_labels(&best_labels)?.canonical();
    Ok(KMeansOptimum { opt_cost: best_cost, partition })
}

/// Advances to the next restricted-growth string with at most `k` blocks.
fn next_rgs(labels: &mut [usize], k: usize) -> bool {
    let n = labels.len();
    for i in (1..n).rev() {
        let max_prefix = labels[..i].iter().copied().max().unwrap_or(0);
        if labels[i] <= max_prefix && labels[i] + 1 < k {
            labels[i] += 1;
            for l in &mut labels[i + 1..] {
                *l = 0;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct KMedianOptimum {
    pub opt_cost: f64,
    pub centers: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Optimal discrete k-median cost over all `k`-subsets of the centers.
pub fn brute_kmedian(inst: &KMedianInstance, k: usize) -> Result<KMedianOptimum> {
    let m = inst.num_centers();
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let k = k.min(m);
    let count = binomial(m, k);
    if count > MAX_KMEDIAN_SUBSETS {
        return Err(Error::SizeGuard(format!(
            "C({m}, {k}) = {count} center subsets exceeds {MAX_KMEDIAN_SUBSETS}"
        )));
    }
    let n = inst.num_demands();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut best = KMedianOptimum { opt_cost: f64::INFINITY, centers: subset.clone() };
    loop {
        let mut cost = 0.0;
        for x in 0..n {
            let row = inst.row(x);
            cost += subset.iter().map(|&c| row[c]).fold(f64::INFINITY, f64::min);
            if cost >= best.opt_cost {
                break;
            }
        }
        if cost < best.opt_cost {
            best = KMedianOptimum { opt_cost: cost, centers: subset.clone() };
        }
        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < m - k + i) else { break };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct CentroidSetCheck {
    pub ok: bool,
    pub worst_subset: Vec<usize>,
    /// `min_{c∈C} Σ_{x∈S}‖x−c‖²` divided by the centroid cost of `S`.
    pub worst_ratio: f64,
}

/// Checks the ε-approximate centroid set property over every non-empty
/// subset `S`: `min_{c∈C} Σ_{x∈S}‖x−c‖² ≤ (1+ε)·min_{c∈ℝᵖ} Σ_{x∈S}‖x−c‖²`.
///
/// The candidate cost uses `Σ‖x−c‖² = Φ(S) + |S|·‖c−μ‖²`, so each subset
/// only needs the candidate nearest to its centroid `μ`.
pub fn verify_centroid_set(x: &PointSet, candidates: &PointSet, eps: f64) -> Result<CentroidSetCheck> {
    let n = x.len();
    if n > MAX_CENTROID_CHECK_POINTS {
        return Err(Error::SizeGuard(format!(
            "centroid set verification is limited to {MAX_CENTROID_CHECK_POINTS} points, got {n}"
        )));
    }
    if candidates.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: candidates.dim() });
    }
    let scale = x.diameter().powi(2).max(f64::MIN_POSITIVE);
    let mut check = CentroidSetCheck { ok: true, worst_subset: Vec::new(), worst_ratio: 1.0 };
    let mut members = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        members.clear();
        members.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        let mu = x.centroid_of(&members);
        let exact: f64 = members.iter().map(|&i| sq_dist(x.point(i), &mu)).sum();
        let nearest = candidates.iter().map(|c| sq_dist(c, &mu)).fold(f64::INFINITY, f64::min);
        let best = exact + members.len() as f64 * nearest;
        let tol = 1e-12 * scale * members.len() as f64;
        let ratio = if exact > tol {
            best / exact
        } else if best <= tol {
            1.0
        } else {
            f64::INFINITY
        };
        if best > (1.0 + eps) * exact + tol {
            check.ok = false;
        }
        if ratio > check.worst_ratio || check.worst_subset.is_empty() {
            check.worst_ratio = ratio;
            check.worst_subset = members.clone();
        }
    }
    Ok(check)
}
