//! k-means and k-median cost functions.
//!
//! For a cluster `S` with centroid `μ` the k-means cost can be computed
//! either against `μ` or from pairwise distances:
//! `Σ_{x∈S} ‖x − μ‖² = (1 / 2|S|) Σ_{x',x''∈S} ‖x' − x''‖²`.
//! Both forms are exposed so tests can check one against the other.

use crate::points::sq_dist;
use crate::{Error, KMedianInstance, Partition, PointSet, Result};

fn check_partition(n: usize, s: &Partition) -> Result<()> {
    if s.universe() != n {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} indices, point set has {n}",
            s.universe()
        )));
    }
    Ok(())
}

/// Sum of squared distances of the members of `cluster` to their centroid.
pub fn cluster_cost(x: &PointSet, cluster: &[usize]) -> f64 {
    let mu = x.centroid_of(cluster);
    cluster.iter().map(|&i| sq_dist(x.point(i), &mu)).sum()
}

/// Same quantity as [`cluster_cost`], via the pairwise identity.
pub fn cluster_cost_pairwise(x: &PointSet, cluster: &[usize]) -> f64 {
    let mut total = 0.0;
    for (a, &i) in cluster.iter().enumerate() {
        for &j in &cluster[a + 1..] {
            total += sq_dist(x.point(i), x.point(j));
        }
    }
    // each unordered pair appears twice in the full double sum
    total / cluster.len() as f64
}

/// `cost_X(S)`: every cluster served by its own centroid.
pub fn cost_partition_kmeans(x: &PointSet, s: &Partition) -> Result<f64> {
    check_partition(x.len(), s)?;
    Ok(s.clusters().iter().map(|cl| cluster_cost(x, cl)).sum())
}

pub fn cost_partition_kmeans_pairwise(x: &PointSet, s: &Partition) -> Result<f64> {
    check_partition(x.len(), s)?;
    Ok(s.clusters().iter().map(|cl| cluster_cost_pairwise(x, cl)).sum())
}

/// `cost_X(C)`: the partition induced by nearest-center assignment (ties to
/// the lowest center index), scored with centroids.
///
/// Centers that attract no point do not contribute a cluster.
pub fn cost_centers_kmeans(x: &PointSet, centers: &PointSet) -> Result<(f64, Partition)> {
    if centers.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: centers.dim() });
    }
    let mut clusters = vec![Vec::new(); centers.len()];
    for (i, p) in x.iter().enumerate() {
        let mut best = (0, f64::INFINITY);
        for (c, q) in centers.iter().enumerate() {
            let d = sq_dist(p, q);
            if d < best.1 {
                best = (c, d);
            }
        }
        clusters[best.0].push(i);
    }
    clusters.retain(|cl| !cl.is_empty());
    let part = Partition::new(clusters, x.len())?;
    let cost = cost_partition_kmeans(x, &part)?;
    Ok((cost, part))
}

/// Direct assignment cost `Σ_x min_c ‖x − c‖²`.
pub fn assignment_cost(x: &PointSet, centers: &PointSet) -> Result<f64> {
    if centers.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: centers.dim() });
    }
    Ok(x.iter()
        .map(|p| centers.iter().map(|q| sq_dist(p, q)).fold(f64::INFINITY, f64::min))
        .sum())
}

/// `cost_{𝒟,d}(S)`: every cluster served by its best single candidate center.
pub fn cost_partition_kmedian(inst: &KMedianInstance, s: &Partition) -> Result<f64> {
    check_partition(inst.num_demands(), s)?;
    let mut total = 0.0;
    for cluster in s.clusters() {
        let best = (0..inst.num_centers())
            .map(|c| cluster.iter().map(|&j| inst.distance(j, c)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        total += best;
    }
    Ok(total)
}
