//! The k-median LP relaxation.
//!
//! ```text
//! min  Σ_{x,c} d(x,c)·z_xc
//! s.t. Σ_c y_c = k,   Σ_c z_xc = 1 (∀x),   z_xc ≤ y_c (∀x,c),   y, z ≥ 0
//! ```
//!
//! [`solve_lp`] returns the raw optimum; [`normalize`] splits centers into
//! co-located copies until every `z_xc` is either `0` or `y_c`.

pub mod normalize;
pub mod simplex;

pub use normalize::{lp_radii, normalize, CenterCopy, FractionalSolution};
pub use simplex::{Constraint, LinearProgram, Relation, SimplexOptions};

use crate::{Error, KMedianInstance, Result};

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Feasibility tolerance of the returned solution.
    pub tol: f64,
    pub max_iters: usize,
    pub max_entries: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        let s = SimplexOptions::default();
        Self { tol: 1e-7, max_iters: s.max_iters, max_entries: s.max_entries }
    }
}

/// Raw LP optimum. `z` is demand-major: `z[x * num_centers + c]`.
#[derive(Debug, Clone)]
pub struct RawLpSolution {
    pub k: usize,
    pub num_demands: usize,
    pub num_centers: usize,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

impl RawLpSolution {
    pub fn z(&self, x: usize, c: usize) -> f64 {
        self.z[x * self.num_centers + c]
    }
}

/// Variable layout: `y_c` at `c`, `z_xc` at `C + x·C + c`.
pub fn build_model(inst: &KMedianInstance, k: usize) -> LinearProgram {
    let (n, m) = (inst.num_demands(), inst.num_centers());
    let zi = |x: usize, c: usize| m + x * m + c;
    let mut objective = vec![0.0; m + n * m];
    for x in 0..n {
        objective[zi(x, 0)..zi(x, 0) + m].copy_from_slice(inst.row(x));
    }
    let mut constraints = Vec::with_capacity(1 + n + n * m);
    constraints.push(Constraint { coeffs: (0..m).map(|c| (c, 1.0)).collect(), relation: Relation::Eq, rhs: k as f64 });
    for x in 0..n {
        constraints.push(Constraint {
            coeffs: (0..m).map(|c| (zi(x, c), 1.0)).collect(),
            relation: Relation::Eq,
            rhs: 1.0,
        });
    }
    for x in 0..n {
        for c in 0..m {
            constraints.push(Constraint {
                coeffs: vec![(zi(x, c), 1.0), (c, -1.0)],
                relation: Relation::Le,
                rhs: 0.0,
            });
        }
    }
    LinearProgram { objective, constraints }
}

pub fn solve_lp(inst: &KMedianInstance, k: usize, opts: &LpOptions) -> Result<RawLpSolution> {
    let (n, m) = (inst.num_demands(), inst.num_centers());
    if k == 0 || k > m {
        return Err(Error::Config(format!("k must lie in [1, {m}], got {k}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("LP tolerance must be positive, got {}", opts.tol)));
    }
    let lp = build_model(inst, k);
    let simplex_opts = SimplexOptions {
        max_iters: opts.max_iters,
        max_entries: opts.max_entries,
        ..SimplexOptions::default()
    };
    let sol = simplex::solve(&lp, &simplex_opts).map_err(|e| match e {
        Error::LpInfeasible => Error::Invariant(format!("k-median LP reported infeasible with k={k} ≤ |C|={m}")),
        other => other,
    })?;
    let y = sol.x[..m].to_vec();
    let z = sol.x[m..].to_vec();
    let raw = RawLpSolution { k, num_demands: n, num_centers: m, y, z, value: sol.value, iterations: sol.iterations };
    check_feasible(&raw, opts.tol)?;
    Ok(raw)
}

fn check_feasible(raw: &RawLpSolution, tol: f64) -> Result<()> {
    let total: f64 = raw.y.iter().sum();
    if (total - raw.k as f64).abs() > tol {
        return Err(Error::Numeric(format!("Σy = {total}, expected {}", raw.k)));
    }
    for x in 0..raw.num_demands {
        let mass: f64 = (0..raw.num_centers).map(|c| raw.z(x, c)).sum();
        if (mass - 1.0).abs() > tol {
            return Err(Error::Numeric(format!("demand {x} has assignment mass {mass}")));
        }
        for c in 0..raw.num_centers {
            if raw.z(x, c) > raw.y[c] + tol {
                return Err(Error::Numeric(format!("z[{x}][{c}] = {} exceeds y = {}", raw.z(x, c), raw.y[c])));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSet;

    fn line(v: &[f64]) -> PointSet {
        PointSet::new(v.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn model_dimensions() {
        let inst = KMedianInstance::sq_euclidean(line(&[0.0, 1.0, 2.0]), line(&[0.0, 5.0])).unwrap();
        let lp = build_model(&inst, 1);
        assert_eq!(lp.objective.len(), 2 + 3 * 2);
        assert_eq!(lp.constraints.len(), 1 + 3 + 3 * 2);
    }

    #[test]
    fn two_point_examples() {
        let inst = KMedianInstance::sq_euclidean(line(&[0.0, 10.0]), line(&[0.0, 10.0])).unwrap();
        let opts = LpOptions::default();
        assert!(solve_lp(&inst, 2, &opts).unwrap().value.abs() < 1e-9);
        assert!((solve_lp(&inst, 1, &opts).unwrap().value - 100.0).abs() < 1e-9);
        assert!(matches!(solve_lp(&inst, 3, &opts), Err(Error::Config(_))));
        assert!(matches!(solve_lp(&inst, 0, &opts), Err(Error::Config(_))));
    }

    #[test]
    fn all_centers_open() {
        let inst = KMedianInstance::sq_euclidean(line(&[0.0, 1.0, 3.0, 7.0]), line(&[0.5, 4.0, 9.0])).unwrap();
        let want: f64 = (0..4).map(|x| inst.row(x).iter().copied().fold(f64::INFINITY, f64::min)).sum();
        let got = solve_lp(&inst, 3, &LpOptions::default()).unwrap().value;
        assert!((got - want).abs() < 1e-9);
    }
}
