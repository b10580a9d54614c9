use crate::points::{sq_dist, PointSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `d(c, x) = ‖c − x‖²`.
    SqEuclidean,
    /// Explicit nonnegative table supplied by the caller.
    Table,
}

/// A discrete k-median instance: demands `𝒟`, candidate centers `𝒞` and a
/// dense distance table `d(x, c)`.
///
/// The table is stored demand-major, so [`KMedianInstance::row`] yields the
/// distances from one demand to every candidate center.
#[derive(Debug, Clone)]
pub struct KMedianInstance {
    demands: Option<PointSet>,
    centers: Option<PointSet>,
    n_demands: usize,
    n_centers: usize,
    metric: Metric,
    dist: Vec<f64>,
    back_map: Option<Vec<usize>>,
}

impl KMedianInstance {
    pub fn sq_euclidean(demands: PointSet, centers: PointSet) -> Result<Self> {
        if demands.dim() != centers.dim() {
            return Err(Error::DimensionMismatch { expected: demands.dim(), got: centers.dim() });
        }
        let (n, m) = (demands.len(), centers.len());
        let mut dist = Vec::with_capacity(n * m);
        for x in demands.iter() {
            dist.extend(centers.iter().map(|c| sq_dist(x, c)));
        }
        Ok(Self {
            demands: Some(demands),
            centers: Some(centers),
            n_demands: n,
            n_centers: m,
            metric: Metric::SqEuclidean,
            dist,
            back_map: None,
        })
    }

    /// Builds an instance from an explicit table indexed `table[demand][center]`.
    pub fn from_table(table: Vec<Vec<f64>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one demand is required".into()));
        }
        let m = table[0].len();
        if m == 0 {
            return Err(Error::InvalidInstance("at least one center is required".into()));
        }
        let mut dist = Vec::with_capacity(n * m);
        for (x, row) in table.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "table row {x} has {} entries, expected {m}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "table row {x} holds invalid distance {v}"
                )));
            }
            dist.extend(row);
        }
        Ok(Self {
            demands: None,
            centers: None,
            n_demands: n,
            n_centers: m,
            metric: Metric::Table,
            dist,
            back_map: None,
        })
    }

    pub fn with_back_map(mut self, psi: Vec<usize>) -> Result<Self> {
        if psi.len() != self.n_demands {
            return Err(Error::InvalidInstance(format!(
                "back map has {} entries for {} demands",
                psi.len(),
                self.n_demands
            )));
        }
        let mut seen = vec![false; psi.len()];
        for &i in &psi {
            if i >= psi.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInstance("back map is not a bijection".into()));
            }
        }
        self.back_map = Some(psi);
        Ok(self)
    }

    pub fn num_demands(&self) -> usize {
        self.n_demands
    }

    pub fn num_centers(&self) -> usize {
        self.n_centers
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn demands(&self) -> Option<&PointSet> {
        self.demands.as_ref()
    }

    pub fn centers(&self) -> Option<&PointSet> {
        self.centers.as_ref()
    }

    pub fn back_map(&self) -> Option<&[usize]> {
        self.back_map.as_deref()
    }

    #[inline]
    pub fn distance(&self, demand: usize, center: usize) -> f64 {
        self.dist[demand * self.n_centers + center]
    }

    /// Distances from `demand` to all centers.
    #[inline]
    pub fn row(&self, demand: usize) -> &[f64] {
        &self.dist[demand * self.n_centers..(demand + 1) * self.n_centers]
    }

    /// Nearest center among `open` (ties go to the smallest center index).
    pub fn nearest(&self, demand: usize, open: &[usize]) -> (usize, f64) {
        let row = self.row(demand);
        let mut best = (usize::MAX, f64::INFINITY);
        for &c in open {
            let d = row[c];
            if d < best.1 || (d == best.1 && c < best.0) {
                best = (c, d);
            }
        }
        best
    }

    /// Keeps the listed centers, in the given order.
    pub fn restrict_centers(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidInstance("at least one center is required".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&c| c >= self.n_centers) {
            return Err(Error::InvalidInstance(format!("center {bad} out of range")));
        }
        let mut dist = Vec::with_capacity(self.n_demands * keep.len());
        for x in 0..self.n_demands {
            let row = self.row(x);
            dist.extend(keep.iter().map(|&c| row[c]));
        }
        let centers = match &self.centers {
            Some(c) => Some(c.select(keep)?),
            None => None,
        };
        Ok(Self {
            demands: self.demands.clone(),
            centers,
            n_demands: self.n_demands,
            n_centers: keep.len(),
            metric: self.metric,
            dist,
            back_map: self.back_map.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[f64]) -> PointSet {
        PointSet::new(v.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn squared_euclidean_table() {
        let inst = KMedianInstance::sq_euclidean(line(&[0.0, 10.0]), line(&[0.0, 5.0])).unwrap();
        assert_eq!(inst.row(1), &[100.0, 25.0]);
        assert_eq!(inst.distance(0, 1), 25.0);
        assert_eq!(inst.nearest(1, &[0, 1]), (1, 25.0));
    }

    #[test]
    fn nearest_breaks_ties_by_index() {
        let inst = KMedianInstance::sq_euclidean(line(&[5.0]), line(&[0.0, 10.0])).unwrap();
        assert_eq!(inst.nearest(0, &[1, 0]).0, 0);
    }

    #[test]
    fn table_validation() {
        assert!(KMedianInstance::from_table(vec![]).is_err());
        assert!(KMedianInstance::from_table(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(KMedianInstance::from_table(vec![vec![-1.0]]).is_err());
        let t = KMedianInstance::from_table(vec![vec![1.0, 2.0]]).unwrap();
        assert_eq!(t.metric(), Metric::Table);
        assert!(t.clone().with_back_map(vec![1]).is_err());
        assert!(t.with_back_map(vec![0]).is_ok());
    }

    #[test]
    fn restrict_keeps_order() {
        let inst = KMedianInstance::sq_euclidean(line(&[0.0]), line(&[1.0, 2.0, 3.0])).unwrap();
        let r = inst.restrict_centers(&[2, 0]).unwrap();
        assert_eq!(r.row(0), &[9.0, 1.0]);
    }
}
