#![allow(dead_code)]

use bikmeans::rng::Rng;
use bikmeans::{KMedianInstance, PointSet};
use rand::Rng as _;

pub fn random_points(r: &mut Rng, n: usize, dim: usize, scale: f64) -> PointSet {
    PointSet::new((0..n).map(|_| (0..dim).map(|_| r.random_range(0.0..scale)).collect()).collect()).unwrap()
}

/// Squared-Euclidean instance with separate random demands and centers.
pub fn random_instance(r: &mut Rng, n: usize, centers: usize, dim: usize) -> KMedianInstance {
    let d = random_points(r, n, dim, 10.0);
    let c = random_points(r, centers, dim, 10.0);
    KMedianInstance::sq_euclidean(d, c).unwrap()
}

/// Squared-Euclidean instance whose centers are the demands themselves.
pub fn self_instance(r: &mut Rng, n: usize, dim: usize) -> KMedianInstance {
    let x = random_points(r, n, dim, 10.0);
    KMedianInstance::sq_euclidean(x.clone(), x).unwrap()
}

pub fn random_labels(r: &mut Rng, n: usize) -> Vec<usize> {
    let blocks = r.random_range(1..=n);
    let mut labels: Vec<usize> = (0..n).map(|_| r.random_range(0..blocks)).collect();
    // compact to 0..b so every label is used
    let mut seen = Vec::new();
    for l in labels.iter_mut() {
        let pos = match seen.iter().position(|s| s == l) {
            Some(p) => p,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        };
        *l = pos;
    }
    labels
}
