use rand::Rng as _;
use serde::Serialize;

use crate::cost::cost_centers_kmeans;
use crate::points::sq_dist;
use crate::{rng, Error, PointSet, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedingResult {
    /// Indices of the seeded points, in the order drawn.
    pub seeds: Vec<usize>,
    /// k-means cost of the clustering the seeds induce.
    pub cost: f64,
}

/// k-means++ seeding (`D²` sampling) without Lloyd iterations.
pub fn kmeanspp_baseline(x: &PointSet, m: usize, seed: u64) -> Result<SeedingResult> {
    let n = x.len();
    if m == 0 || m > n {
        return Err(Error::Config(format!("m must lie in [1, {n}], got {m}")));
    }
    let mut r = rng::from_seed(seed);
    let mut seeds = vec![r.random_range(0..n)];
    let mut d2: Vec<f64> = x.iter().map(|p| sq_dist(p, x.point(seeds[0]))).collect();
    while seeds.len() < m {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let u = r.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if d > 0.0 && u < acc {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| d2.iter().rposition(|&d| d > 0.0).unwrap_or(0))
        } else {
            // every point coincides with a seed; fall back to an unused index
            let unused: Vec<usize> = (0..n).filter(|i| !seeds.contains(i)).collect();
            unused[r.random_range(0..unused.len())]
        };
        seeds.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(x.point(i), x.point(next)));
        }
    }
    let centers = x.select(&seeds)?;
    let (cost, _) = cost_centers_kmeans(x, &centers)?;
    Ok(SeedingResult { seeds, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_kmeans;

    #[test]
    fn trivial_cases() {
        let x = PointSet::new(vec![vec![0.0], vec![1.0], vec![5.0]]).unwrap();
        assert_eq!(kmeanspp_baseline(&x, 3, 0).unwrap().cost, 0.0);
        let one = PointSet::new(vec![vec![2.0, 2.0]]).unwrap();
        let r = kmeanspp_baseline(&one, 1, 0).unwrap();
        assert_eq!((r.seeds, r.cost), (vec![0], 0.0));
        assert!(kmeanspp_baseline(&x, 4, 0).is_err());
    }

    #[test]
    fn never_beats_the_optimum() {
        let mut r = rng::from_seed(2);
        let x = PointSet::new((0..8).map(|_| vec![r.random_range(0.0..10.0), r.random_range(0.0..10.0)]).collect())
            .unwrap();
        let opt = brute_kmeans(&x, 3).unwrap().opt_cost;
        let mean: f64 = (0..100).map(|s| kmeanspp_baseline(&x, 3, s).unwrap().cost).sum::<f64>() / 100.0;
        assert!(mean >= opt - 1e-9);
    }

    #[test]
    fn duplicates_are_handled() {
        let x = PointSet::new(vec![vec![1.0]; 4]).unwrap();
        let r = kmeanspp_baseline(&x, 3, 5).unwrap();
        let mut s = r.seeds.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 3);
    }
}
