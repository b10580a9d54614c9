//! ε-approximate centroid sets.
//!
//! For a subset `S` with centroid `μ` and cost `Φ = Σ_{x∈S}‖x − μ‖²`, any
//! candidate `c` costs `Φ + |S|·‖c − μ‖²`. Writing `ρ² = Φ/|S|`, a candidate
//! within `√ε·ρ` of `μ` is therefore good enough. Two facts locate `μ`:
//!
//! * some member of `S` lies within `ρ` of `μ` (the mean squared distance
//!   is `ρ²`), and
//! * unless all members coincide, `ρ ∈ [δ/√(2n), diam]`, where `δ` is the
//!   smallest nonzero pairwise distance.
//!
//! The grid construction therefore places, around every input point and for
//! radii `r` in a geometric progression with ratio `b` covering that range,
//! the lattice points of spacing `2√ε·r / (b√q)` inside the ball of radius
//! `r` plus half a cell diagonal. Every point of that ball then has a lattice
//! point within `√ε·r/b ≤ √ε·ρ`.
//!
//! In high dimension the lattice is too large; for few points the centroids
//! of all non-empty subsets form an exact (0-approximate) centroid set.

use std::collections::HashSet;

use crate::{Error, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CentroidStrategy {
    /// Whichever of the two constructions yields fewer candidates, among
    /// those that fit under the cap.
    #[default]
    Auto,
    Grid,
    SubsetCentroids,
}

impl std::str::FromStr for CentroidStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "grid" => Ok(Self::Grid),
            "subsets" | "subset-centroids" => Ok(Self::SubsetCentroids),
            other => Err(Error::Parse(format!("unknown centroid strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CentroidParams {
    pub scale_base: f64,
    pub cap: usize,
    pub strategy: CentroidStrategy,
}

impl Default for CentroidParams {
    fn default() -> Self {
        Self { scale_base: 2.0, cap: 200_000, strategy: CentroidStrategy::Auto }
    }
}

/// Keeps the lattice strictly inside the admissible error radius.
const SPACING_MARGIN: f64 = 1.0 - 1e-9;

/// Distinct input points, in first-occurrence order.
fn distinct_points(x: &PointSet) -> Vec<usize> {
    let mut seen = HashSet::new();
    (0..x.len())
        .filter(|&i| seen.insert(x.point(i).iter().map(|v| v.to_bits()).collect::<Vec<_>>()))
        .collect()
}

struct GridPlan {
    radii: Vec<f64>,
    /// Lattice offsets in units of the spacing (shared by all radii).
    offsets: Vec<Vec<i32>>,
    /// spacing / r
    relative_spacing: f64,
}

impl GridPlan {
    fn candidate_count(&self, anchors: usize) -> usize {
        self.radii.len().saturating_mul(self.offsets.len()).saturating_mul(anchors).saturating_add(anchors)
    }
}

/// Integer vectors `z ∈ ℤ^q` with `‖z‖ ≤ radius`; `None` once more than
/// `limit` have been found.
fn lattice_ball(q: usize, radius: f64, limit: usize) -> Option<Vec<Vec<i32>>> {
    fn recurse(
        q: usize,
        r2_left: f64,
        prefix: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
        limit: usize,
    ) -> bool {
        if prefix.len() == q {
            out.push(prefix.clone());
            return out.len() <= limit;
        }
        let bound = r2_left.max(0.0).sqrt().floor() as i32;
        for v in -bound..=bound {
            let left = r2_left - (v as f64) * (v as f64);
            if left < -1e-9 {
                continue;
            }
            prefix.push(v);
            let ok = recurse(q, left, prefix, out, limit);
            prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(q);
    recurse(q, radius * radius, &mut prefix, &mut out, limit).then_some(out)
}

fn plan_grid(x: &PointSet, eps_prime: f64, params: &CentroidParams, anchors: usize) -> Result<Option<GridPlan>> {
    let Some(delta) = x.min_nonzero_distance() else {
        return Ok(None);
    };
    let b = params.scale_base;
    let q = x.dim() as f64;
    let n = x.len() as f64;
    let rho_min = delta / (2.0 * n).sqrt();
    let diam = x.diameter();
    let mut radii = vec![rho_min];
    while *radii.last().unwrap() < diam {
        let next = radii.last().unwrap() * b;
        radii.push(next);
    }
    let relative_spacing = 2.0 * eps_prime.sqrt() / (b * q.sqrt()) * SPACING_MARGIN;
    let half_diag = relative_spacing * q.sqrt() / 2.0;
    let lattice_radius = (1.0 + half_diag) / relative_spacing;
    let per_radius_limit = params.cap / (radii.len() * anchors).max(1);
    match lattice_ball(x.dim(), lattice_radius, per_radius_limit) {
        Some(offsets) => Ok(Some(GridPlan { radii, offsets, relative_spacing })),
        None => Err(Error::CentroidSetTooLarge {
            count: estimate_count(x.dim(), lattice_radius)
                .saturating_mul(radii.len() * anchors)
                .saturating_add(anchors),
            cap: params.cap,
        }),
    }
}

/// Volume estimate of the lattice ball, used only for error messages.
fn estimate_count(q: usize, radius: f64) -> usize {
    let qf = q as f64;
    let log_vol = (qf / 2.0) * std::f64::consts::PI.ln() - ln_gamma(qf / 2.0 + 1.0) + qf * radius.ln();
    if log_vol > 40.0 {
        usize::MAX
    } else {
        log_vol.exp().ceil() as usize
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Stirling series; accurate enough for a size estimate
    if x < 7.0 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
}

/// Lattice construction described in the module docs.
pub fn grid_centroid_set(x: &PointSet, eps_prime: f64, params: &CentroidParams) -> Result<PointSet> {
    check_eps(eps_prime)?;
    if !(params.scale_base > 1.0) {
        return Err(Error::Config(format!("grid scale base must exceed 1, got {}", params.scale_base)));
    }
    let anchors = distinct_points(x);
    let Some(plan) = plan_grid(x, eps_prime, params, anchors.len())? else {
        return x.select(&anchors);
    };
    let count = plan.candidate_count(anchors.len());
    if count > params.cap {
        return Err(Error::CentroidSetTooLarge { count, cap: params.cap });
    }
    let dim = x.dim();
    let mut coords = Vec::with_capacity(count * dim);
    let mut seen = HashSet::with_capacity(count);
    let mut push = |p: &[f64], coords: &mut Vec<f64>| {
        if seen.insert(p.iter().map(|v| v.to_bits()).collect::<Vec<_>>()) {
            coords.extend_from_slice(p);
        }
    };
    for &a in &anchors {
        push(x.point(a), &mut coords);
    }
    let mut buf = vec![0.0; dim];
    for &a in &anchors {
        let anchor = x.point(a);
        for &r in &plan.radii {
            let s = plan.relative_spacing * r;
            for z in &plan.offsets {
                for ((b, &o), &zi) in buf.iter_mut().zip(anchor).zip(z) {
                    *b = o + s * zi as f64;
                }
                push(&buf, &mut coords);
            }
        }
    }
    PointSet::from_flat(dim, coords)
}

fn subset_count(points: usize) -> usize {
    if points >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        (1usize << points) - 1
    }
}

/// Centroids of all non-empty subsets of the input points. Repeated points
/// count with multiplicity, so every cluster centroid appears exactly.
pub fn subset_centroid_set(x: &PointSet, cap: usize) -> Result<PointSet> {
    let count = subset_count(x.len());
    if count > cap {
        return Err(Error::CentroidSetTooLarge { count, cap });
    }
    let mut coords = Vec::with_capacity(count * x.dim());
    let mut seen = HashSet::with_capacity(count);
    let mut members = Vec::with_capacity(x.len());
    for mask in 1..=count {
        members.clear();
        members.extend((0..x.len()).filter(|b| mask & (1 << b) != 0));
        let mu = x.centroid_of(&members);
        if seen.insert(mu.iter().map(|v| v.to_bits()).collect::<Vec<_>>()) {
            coords.extend(mu);
        }
    }
    PointSet::from_flat(x.dim(), coords)
}

fn check_eps(eps_prime: f64) -> Result<()> {
    if eps_prime > 0.0 && eps_prime < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps_prime must lie in (0, 1), got {eps_prime}")))
    }
}

/// Builds an `eps_prime`-approximate centroid set for `x`.
pub fn build_centroid_set(x: &PointSet, eps_prime: f64, params: &CentroidParams) -> Result<PointSet> {
    check_eps(eps_prime)?;
    match params.strategy {
        CentroidStrategy::Grid => grid_centroid_set(x, eps_prime, params),
        CentroidStrategy::SubsetCentroids => subset_centroid_set(x, params.cap),
        CentroidStrategy::Auto => {
            let anchors = distinct_points(x).len();
            let subsets = subset_count(x.len());
            let grid = match plan_grid(x, eps_prime, params, anchors) {
                Ok(Some(plan)) => Ok(plan.candidate_count(anchors)),
                Ok(None) => Ok(anchors),
                Err(e) => Err(e),
            };
            match grid {
                Ok(g) if g < subsets || subsets > params.cap => grid_centroid_set(x, eps_prime, params),
                Ok(_) => subset_centroid_set(x, params.cap),
                Err(e) if subsets > params.cap => Err(e),
                Err(_) => subset_centroid_set(x, params.cap),
            }
        }
    }
}
