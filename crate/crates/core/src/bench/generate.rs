use std::path::PathBuf;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::{io, rng, Error, PointSet, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// `true_k` unit-variance Gaussian blobs whose means sit `separation`
    /// apart along the first axis; point `i` is drawn from blob `i mod true_k`.
    GaussianMixture { n: usize, p: usize, true_k: usize, separation: f64 },
    /// Uniform in `[0, 1]^p`.
    UniformCube { n: usize, p: usize },
    /// Headerless CSV file.
    File { path: PathBuf },
}

/// Points and, for mixtures, the blob each point was drawn from.
pub fn generate_labeled(gen: &Generator, seed: u64) -> Result<(PointSet, Option<Vec<usize>>)> {
    let mut r = rng::from_seed(seed);
    match *gen {
        Generator::GaussianMixture { n, p, true_k, separation } => {
            if n == 0 || p == 0 || true_k == 0 {
                return Err(Error::Config("gaussian-mixture needs n, p, true_k ≥ 1".into()));
            }
            if !(separation >= 0.0) {
                return Err(Error::Config(format!("separation must be nonnegative, got {separation}")));
            }
            let labels: Vec<usize> = (0..n).map(|i| i % true_k).collect();
            let rows = labels
                .iter()
                .map(|&l| {
                    (0..p)
                        .map(|j| {
                            let g: f64 = StandardNormal.sample(&mut r);
                            g + if j == 0 { separation * l as f64 } else { 0.0 }
                        })
                        .collect()
                })
                .collect();
            Ok((PointSet::new(rows)?, Some(labels)))
        }
        Generator::UniformCube { n, p } => {
            if n == 0 || p == 0 {
                return Err(Error::Config("uniform-cube needs n, p ≥ 1".into()));
            }
            let rows = (0..n).map(|_| (0..p).map(|_| r.random::<f64>()).collect()).collect();
            Ok((PointSet::new(rows)?, None))
        }
        Generator::File { ref path } => Ok((io::read_points_csv(path)?, None)),
    }
}

pub fn generate(gen: &Generator, seed: u64) -> Result<PointSet> {
    Ok(generate_labeled(gen, seed)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_kmeans;
    use crate::Partition;

    #[test]
    fn empty_cube_is_rejected() {
        assert!(generate(&Generator::UniformCube { n: 0, p: 2 }, 0).is_err());
    }

    #[test]
    fn deterministic_bytes() {
        let g = Generator::UniformCube { n: 5, p: 3 };
        let mut a = Vec::new();
        let mut b = Vec::new();
        io::write_points_csv(&mut a, &generate(&g, 4).unwrap()).unwrap();
        io::write_points_csv(&mut b, &generate(&g, 4).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn separated_mixture_is_recovered() {
        let g = Generator::GaussianMixture { n: 9, p: 2, true_k: 3, separation: 100.0 };
        let (x, labels) = generate_labeled(&g, 1).unwrap();
        let want = Partition::from_labels(&labels.unwrap()).unwrap().canonical();
        assert_eq!(brute_kmeans(&x, 3).unwrap().partition, want);
    }
}
