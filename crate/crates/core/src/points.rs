use crate::{Error, Result};

/// A non-empty, ordered set of points in `dim`-dimensional real space.
///
/// Coordinates are stored row-major in one flat buffer; point `i` occupies
/// `coords[i * dim..(i + 1) * dim]`. Indices are the stable ids `0..len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidPointSet("at least one point is required".into()));
        };
        let dim = first.len();
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPointSet("dimension must be positive".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidPointSet("at least one point is required".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidPointSet(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPointSet(format!(
                "non-finite coordinate in point {}",
                pos / dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a point set holds at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Keeps the points at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidPointSet(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, coords)
    }

    pub fn centroid_of(&self, indices: &[usize]) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for &i in indices {
            for (acc, v) in c.iter_mut().zip(self.point(i)) {
                *acc += v;
            }
        }
        let inv = 1.0 / indices.len() as f64;
        c.iter_mut().for_each(|v| *v *= inv);
        c
    }

    /// Largest pairwise Euclidean distance (0 for a single point).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(sq_dist(self.point(i), self.point(j)));
            }
        }
        best.sqrt()
    }

    /// Smallest strictly positive pairwise Euclidean distance, if any.
    pub fn min_nonzero_distance(&self) -> Option<f64> {
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = sq_dist(self.point(i), self.point(j));
                if d > 0.0 && d < best {
                    best = d;
                }
            }
        }
        best.is_finite().then(|| best.sqrt())
    }
}

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_ragged_input() {
        assert!(PointSet::new(vec![]).is_err());
        assert!(matches!(
            PointSet::new(vec![vec![0.0, 1.0], vec![2.0]]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(PointSet::new(vec![vec![]]).is_err());
        assert!(PointSet::new(vec![vec![f64::NAN]]).is_err());
    }

    #[test]
    fn geometry_helpers() {
        let x = PointSet::new(vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x.dim(), 2);
        assert_eq!(x.diameter(), 5.0);
        assert_eq!(x.min_nonzero_distance(), Some(5.0));
        assert_eq!(x.centroid_of(&[0, 1]), vec![1.5, 2.0]);
        assert_eq!(x.select(&[1]).unwrap().point(0), &[3.0, 4.0]);
        let single = PointSet::new(vec![vec![1.0]]).unwrap();
        assert_eq!(single.min_nonzero_distance(), None);
    }
}
