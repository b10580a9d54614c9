//! Center splitting.
//!
//! Whenever `0 < z_xc < y_c`, center `c` is split into two co-located
//! copies: `c₁` keeps the id with weight `z_xc`, `c₂` is appended with weight
//! `y_c − z_xc`, and every demand `x′` redistributes its mass as
//! `z_{x′c₁} = min(z_{x′c}, y_{c₁})`, `z_{x′c₂} = z_{x′c} − z_{x′c₁}`.
//! Demands are processed in index order and copies in id order. A demand that
//! has already been processed only ever holds `0` or the full weight of a
//! copy, and the rule above maps both cases to `0` or the full weights of the
//! two halves, so one pass leaves every `z_xc ∈ {0, y_c}`.

use serde::{Deserialize, Serialize};

use super::RawLpSolution;
use crate::KMedianInstance;

const DROP: f64 = 1e-12;
/// `z` values this close to `0` or `y_c` are snapped.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterCopy {
    /// Index into the candidate centers of the instance.
    pub center: usize,
    pub weight: f64,
}

/// A normalized fractional solution: demand `x` is served by each copy in
/// `support[x]` with mass equal to that copy's full weight.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub k: usize,
    pub copies: Vec<CenterCopy>,
    /// Per demand, ascending copy ids with `z_xc = y_c`.
    pub support: Vec<Vec<usize>>,
    pub lp_value: f64,
    pub radii: Vec<f64>,
}

impl FractionalSolution {
    pub fn num_demands(&self) -> usize {
        self.support.len()
    }

    pub fn z(&self, x: usize, copy: usize) -> f64 {
        if self.support[x].binary_search(&copy).is_ok() {
            self.copies[copy].weight
        } else {
            0.0
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.copies.iter().map(|c| c.weight).sum()
    }

    /// Distance from demand `x` to copy `copy`.
    pub fn distance(&self, inst: &KMedianInstance, x: usize, copy: usize) -> f64 {
        inst.distance(x, self.copies[copy].center)
    }
}

pub fn normalize(inst: &KMedianInstance, raw: &RawLpSolution) -> FractionalSolution {
    let n = raw.num_demands;
    // one copy per center of nonnegligible weight, rescaled to total k
    let kept: Vec<usize> = (0..raw.num_centers).filter(|&c| raw.y[c] >= DROP).collect();
    let total: f64 = kept.iter().map(|&c| raw.y[c]).sum();
    let scale = if total > 0.0 { raw.k as f64 / total } else { 1.0 };
    let mut weights: Vec<f64> = kept.iter().map(|&c| raw.y[c] * scale).collect();
    let mut origin: Vec<usize> = kept.clone();
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            kept.iter()
                .enumerate()
                .map(|(i, &c)| {
                    let v = raw.z(x, c) * scale;
                    if v < DROP {
                        0.0
                    } else {
                        v.min(weights[i])
                    }
                })
                .collect()
        })
        .collect();

    for x in 0..n {
        let mut c = 0;
        while c < weights.len() {
            let (v, y) = (z[x][c], weights[c]);
            if v != 0.0 && v < y - SNAP * y.max(1.0) {
                let (y1, y2) = (v, y - v);
                weights[c] = y1;
                weights.push(y2);
                origin.push(origin[c]);
                for row in z.iter_mut() {
                    let old = row[c];
                    let first = old.min(y1);
                    row[c] = first;
                    row.push(old - first);
                }
            } else if v != 0.0 {
                z[x][c] = y;
            }
            c += 1;
        }
    }

    let copies: Vec<CenterCopy> =
        origin.iter().zip(&weights).map(|(&center, &weight)| CenterCopy { center, weight }).collect();
    let support: Vec<Vec<usize>> = z
        .iter()
        .map(|row| (0..copies.len()).filter(|&c| row[c] >= DROP && row[c] >= copies[c].weight - SNAP).collect())
        .collect();
    let mut sol = FractionalSolution { k: raw.k, copies, support, lp_value: 0.0, radii: Vec::new() };
    let (radii, value) = lp_radii(inst, &sol);
    sol.radii = radii;
    sol.lp_value = value;
    sol
}

/// `R_x = Σ_{c∈C_x} y_c·d(x,c)` for every demand, and their sum.
pub fn lp_radii(inst: &KMedianInstance, sol: &FractionalSolution) -> (Vec<f64>, f64) {
    let radii: Vec<f64> = sol
        .support
        .iter()
        .enumerate()
        .map(|(x, s)| s.iter().map(|&c| sol.copies[c].weight * sol.distance(inst, x, c)).sum())
        .collect();
    let value = radii.iter().sum();
    (radii, value)
}
