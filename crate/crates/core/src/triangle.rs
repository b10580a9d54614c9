//! Checker for the α-relaxed 3-hop triangle inequality
//! `d(i, j) ≤ α · (d(i′, j) + d(i′, j′) + d(i, j′))`
//! over demands `j, j′` and centers `i, i′`: the direct distance from `j` to
//! `i` is compared with the three-hop path `j → i′ → j′ → i`.
//!
//! Squared Euclidean distances satisfy it with `α = 3`, tight for four
//! collinear, evenly spaced points.

use rand::Rng as _;
use serde::Serialize;

use crate::{rng, Error, KMedianInstance, Result};

/// One `(j, i′, j′, i)` quadruple, listed in path order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Quadruple {
    pub j: usize,
    pub i_prime: usize,
    pub j_prime: usize,
    pub i: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThreeHopReport {
    pub checked: u64,
    pub violations: u64,
    /// Largest `d(i,j) / path` over quadruples with a nonzero path length.
    pub worst_ratio: f64,
    pub worst: Option<Quadruple>,
}

/// Ratio `d(i,j) / (d(i′,j) + d(i′,j′) + d(i,j′))`; `None` when the path has
/// zero length.
pub fn hop_ratio(inst: &KMedianInstance, q: Quadruple) -> Option<f64> {
    let path = inst.distance(q.j, q.i_prime)
        + inst.distance(q.j_prime, q.i_prime)
        + inst.distance(q.j_prime, q.i);
    (path > 0.0).then(|| inst.distance(q.j, q.i) / path)
}

struct Tally {
    alpha: f64,
    report: ThreeHopReport,
}

impl Tally {
    fn new(alpha: f64) -> Self {
        Self {
            alpha,
            report: ThreeHopReport { checked: 0, violations: 0, worst_ratio: 0.0, worst: None },
        }
    }

    fn visit(&mut self, inst: &KMedianInstance, q: Quadruple) {
        self.report.checked += 1;
        match hop_ratio(inst, q) {
            Some(r) => {
                // relative slack for rounding in the three-term sum
                if r > self.alpha * (1.0 + 1e-12) {
                    self.report.violations += 1;
                }
                if r > self.report.worst_ratio || self.report.worst.is_none() {
                    self.report.worst_ratio = r;
                    self.report.worst = Some(q);
                }
            }
            None => {
                if inst.distance(q.j, q.i) > 0.0 {
                    self.report.violations += 1;
                }
            }
        }
    }
}

/// Samples `samples` quadruples uniformly at random.
pub fn check_relaxed_3hop(
    inst: &KMedianInstance,
    alpha: f64,
    samples: u64,
    seed: u64,
) -> Result<ThreeHopReport> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let (n, m) = (inst.num_demands(), inst.num_centers());
    let mut rng = rng::from_seed(seed);
    let mut tally = Tally::new(alpha);
    for _ in 0..samples {
        let q = Quadruple {
            j: rng.random_range(0..n),
            i_prime: rng.random_range(0..m),
            j_prime: rng.random_range(0..n),
            i: rng.random_range(0..m),
        };
        tally.visit(inst, q);
    }
    Ok(tally.report)
}

/// Visits every quadruple; intended for small instances.
pub fn check_relaxed_3hop_exhaustive(inst: &KMedianInstance, alpha: f64) -> Result<ThreeHopReport> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    let (n, m) = (inst.num_demands(), inst.num_centers());
    let total = (n as u128 * m as u128).pow(2);
    if total > 100_000_000 {
        return Err(Error::SizeGuard(format!("{total} quadruples is too many to enumerate")));
    }
    let mut tally = Tally::new(alpha);
    for j in 0..n {
        for i_prime in 0..m {
            for j_prime in 0..n {
                for i in 0..m {
                    tally.visit(inst, Quadruple { j, i_prime, j_prime, i });
                }
            }
        }
    }
    Ok(tally.report)
}
