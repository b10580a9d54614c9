//! Reduction from k-means to discrete k-median.
//!
//! With `ε′ = ε/3`, the points are projected by a one-sided JL map `φ`, an
//! `ε′`-approximate centroid set `𝒞` of `φ(X)` is built, and the instance
//! `⟨𝒟 = φ(X), 𝒞, d = ‖·‖²⟩` is returned together with the back map
//! `ψ = φ⁻¹` on indices. For every partition `S` of `𝒟` the result satisfies
//! `cost_X(ψ(S)) ≤ cost_{𝒟,d}(S) ≤ (1+ε)·cost_X(ψ(S))`.

pub mod centroid;
pub mod jl;

use serde::{Deserialize, Serialize};

use crate::{Error, KMedianInstance, PointSet, Result};

pub use centroid::{build_centroid_set, CentroidParams, CentroidStrategy};
pub use jl::{jl_transform, JlParams};

#[derive(Debug, Clone, Copy)]
pub struct ReductionConfig {
    /// Overall loss `ε ∈ (0, 1/2)`.
    pub epsilon: f64,
    pub target_dim_cap: usize,
    pub grid_scale_base: f64,
    pub seed: u64,
    pub jl_constant: f64,
    pub max_retries: usize,
    pub centroid_cap: usize,
    pub strategy: CentroidStrategy,
}

impl ReductionConfig {
    pub fn new(epsilon: f64) -> Self {
        let jl = JlParams::default();
        let grid = CentroidParams::default();
        Self {
            epsilon,
            target_dim_cap: jl.dim_cap,
            grid_scale_base: grid.scale_base,
            seed: 0,
            jl_constant: jl.constant,
            max_retries: jl.max_retries,
            centroid_cap: grid.cap,
            strategy: grid.strategy,
        }
    }

    pub fn eps_prime(&self) -> f64 {
        self.epsilon / 3.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1/2), got {}", self.epsilon)));
        }
        if self.target_dim_cap == 0 {
            return Err(Error::Config("target_dim_cap must be positive".into()));
        }
        if !(self.grid_scale_base > 1.0) {
            return Err(Error::Config("grid_scale_base must exceed 1".into()));
        }
        Ok(())
    }

    pub fn jl_params(&self) -> JlParams {
        JlParams {
            constant: self.jl_constant,
            dim_cap: self.target_dim_cap,
            max_retries: self.max_retries,
            seed: self.seed,
        }
    }

    pub fn centroid_params(&self) -> CentroidParams {
        CentroidParams { scale_base: self.grid_scale_base, cap: self.centroid_cap, strategy: self.strategy }
    }
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub instance: KMedianInstance,
    /// `φ(X)`; identical to the demands of `instance`.
    pub projected: PointSet,
    pub centroid_set: PointSet,
    /// Demand index → original point index.
    pub psi: Vec<usize>,
    pub achieved_distortion: f64,
}

/// Summary written by the `reduce` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub schema: u32,
    pub n: usize,
    pub p: usize,
    pub p_tilde: usize,
    #[serde(rename = "|C|")]
    pub num_centers: usize,
    pub achieved_distortion: f64,
    pub epsilon: f64,
    pub eps_prime: f64,
}

impl ReductionResult {
    pub fn report(&self, original: &PointSet, cfg: &ReductionConfig) -> ReductionReport {
        ReductionReport {
            schema: crate::io::SCHEMA_VERSION,
            n: original.len(),
            p: original.dim(),
            p_tilde: self.projected.dim(),
            num_centers: self.centroid_set.len(),
            achieved_distortion: self.achieved_distortion,
            epsilon: cfg.epsilon,
            eps_prime: cfg.eps_prime(),
        }
    }
}

pub fn build_instance(x: &PointSet, cfg: &ReductionConfig) -> Result<ReductionResult> {
    cfg.validate()?;
    let eps_prime = cfg.eps_prime();
    let (projected, achieved_distortion) = jl_transform(x, eps_prime, &cfg.jl_params())?;
    let centroid_set = build_centroid_set(&projected, eps_prime, &cfg.centroid_params())?;
    // φ keeps point order, so ψ is the identity on indices
    let psi: Vec<usize> = (0..x.len()).collect();
    let instance =
        KMedianInstance::sq_euclidean(projected.clone(), centroid_set.clone())?.with_back_map(psi.clone())?;
    Ok(ReductionResult { instance, projected, centroid_set, psi, achieved_distortion })
}
