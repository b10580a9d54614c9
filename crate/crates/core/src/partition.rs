use crate::{Error, Result};

/// A partition of `0..n` into disjoint, non-empty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    clusters: Vec<Vec<usize>>,
    n: usize,
}

impl Partition {
    pub fn new(clusters: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (i, cluster) in clusters.iter().enumerate() {
            if cluster.is_empty() {
                return Err(Error::InvalidPartition(format!("cluster {i} is empty")));
            }
            for &j in cluster {
                if j >= n {
                    return Err(Error::InvalidPartition(format!("index {j} out of range 0..{n}")));
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::InvalidPartition(format!("index {j} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {missing} is not covered")));
        }
        Ok(Self { clusters, n })
    }

    /// Groups indices by label; clusters appear in order of first occurrence.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = Vec::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in labels.iter().enumerate() {
            match order.iter().position(|&l| l == label) {
                Some(pos) => clusters[pos].push(i),
                None => {
                    order.push(label);
                    clusters.push(vec![i]);
                }
            }
        }
        Self::new(clusters, labels.len())
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Size of the partitioned index set.
    pub fn universe(&self) -> usize {
        self.n
    }

    /// Cluster label per index.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (c, cluster) in self.clusters.iter().enumerate() {
            for &j in cluster {
                labels[j] = c;
            }
        }
        labels
    }

    /// Clusters with sorted members, themselves sorted; for order-free comparison.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut c: Vec<Vec<usize>> = self
            .clusters
            .iter()
            .map(|cl| {
                let mut cl = cl.clone();
                cl.sort_unstable();
                cl
            })
            .collect();
        c.sort();
        c
    }

    /// Relabels every member through `map` (used for the back map ψ).
    pub fn map_indices(&self, map: &[usize]) -> Result<Self> {
        let clusters = self
            .clusters
            .iter()
            .map(|cl| cl.iter().map(|&j| map[j]).collect())
            .collect();
        Self::new(clusters, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_cover_and_disjointness() {
        assert!(Partition::new(vec![vec![0], vec![1]], 2).is_ok());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
        assert!(Partition::new(vec![vec![0, 0]], 1).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![2]], 2).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let p = Partition::from_labels(&[3, 1, 3, 2]).unwrap();
        assert_eq!(p.clusters(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.labels(), vec![0, 1, 0, 2]);
        assert_eq!(p.k(), 3);
    }
}
