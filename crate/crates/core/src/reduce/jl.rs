//! One-sided Johnson–Lindenstrauss projection.
//!
//! A Gaussian matrix scaled by `1/√p̃` maps the points to `p̃` dimensions.
//! The image is then rescaled so that no squared pairwise distance shrinks,
//! and the projection is accepted only if no squared distance grows by more
//! than `1 + ε′`. Failed draws are retried on fresh substreams.

use rand_distr::{Distribution, StandardNormal};

use crate::points::sq_dist;
use crate::{rng, Error, PointSet, Result};

#[derive(Debug, Clone, Copy)]
pub struct JlParams {
    /// `c` in `p̃ = ⌈c · ln n / ε′²⌉`.
    pub constant: f64,
    /// Upper cap on `p̃`.
    pub dim_cap: usize,
    pub max_retries: usize,
    pub seed: u64,
}

impl Default for JlParams {
    fn default() -> Self {
        Self { constant: 40.0, dim_cap: 4096, max_retries: 64, seed: 0 }
    }
}

pub fn target_dim(n: usize, eps_prime: f64, params: &JlParams) -> usize {
    let raw = (params.constant * (n.max(2) as f64).ln() / (eps_prime * eps_prime)).ceil();
    (raw as usize).clamp(1, params.dim_cap.max(1))
}

/// Minimum and maximum of `‖φx − φy‖² / ‖x − y‖²` over pairs with `x ≠ y`.
pub fn distortion_range(original: &PointSet, image: &PointSet) -> (f64, f64) {
    let n = original.len();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let d = sq_dist(original.point(i), original.point(j));
            if d > 0.0 {
                let r = sq_dist(image.point(i), image.point(j)) / d;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    if lo.is_infinite() {
        (1.0, 1.0)
    } else {
        (lo, hi)
    }
}

/// Returns `(φ(X), achieved distortion)`. When `p ≤ p̃` the input is
/// returned unchanged with distortion 1.
pub fn jl_transform(x: &PointSet, eps_prime: f64, params: &JlParams) -> Result<(PointSet, f64)> {
    if !(eps_prime > 0.0 && eps_prime < 1.0) {
        return Err(Error::Domain(format!("eps_prime must lie in (0, 1), got {eps_prime}")));
    }
    let n = x.len();
    let p = x.dim();
    let q = target_dim(n, eps_prime, params);
    if p <= q || n == 1 {
        return Ok((x.clone(), 1.0));
    }

    let mut best_distortion = f64::INFINITY;
    for attempt in 0..params.max_retries.max(1) {
        let mut rng = rng::substream(params.seed, attempt as u64);
        let scale = 1.0 / (q as f64).sqrt();
        let matrix: Vec<f64> = (0..q * p)
            .map(|_| {
                let g: f64 = StandardNormal.sample(&mut rng);
                g * scale
            })
            .collect();
        let mut coords = Vec::with_capacity(n * q);
        for point in x.iter() {
            for row in matrix.chunks_exact(p) {
                coords.push(row.iter().zip(point).map(|(a, b)| a * b).sum::<f64>());
            }
        }
        let image = PointSet::from_flat(q, coords)?;
        let (lo, hi) = distortion_range(x, &image);
        if lo <= 0.0 {
            continue;
        }
        // lift every squared ratio to at least 1; the small margin absorbs
        // rounding in the rescaled products
        let lift = (1.0 / lo).sqrt() * (1.0 + 1e-15);
        let distortion = hi / lo;
        best_distortion = best_distortion.min(distortion);
        if distortion <= 1.0 + eps_prime {
            let coords = image.coords().iter().map(|v| v * lift).collect();
            let lifted = PointSet::from_flat(q, coords)?;
            let (_, achieved) = distortion_range(x, &lifted);
            return Ok((lifted, achieved));
        }
    }
    Err(Error::ProjectionFailure {
        target_dim: q,
        attempts: params.max_retries.max(1),
        bound: 1.0 + eps_prime,
        best_distortion,
    })
}
