//! Bi-criteria k-means clustering.
//!
//! A k-means instance is reduced to a discrete k-median instance over an
//! approximate centroid set (after an optional Johnson–Lindenstrauss
//! projection). The k-median instance is then solved either by rounding its
//! LP relaxation onto `m = βk` centers, or by local search with swaps of size
//! at most `p`. Brute-force oracles and closed-form bound calculators are
//! included so that every guarantee can be checked on small inputs.
//!
//! ```
//! use bikmeans::{bounds, PointSet, oracle};
//!
//! let x = PointSet::new(vec![vec![0.0], vec![2.0], vec![10.0]]).unwrap();
//! let best = oracle::brute_kmeans(&x, 2).unwrap();
//! assert!((best.opt_cost - 2.0).abs() < 1e-12);
//! assert!(bounds::alpha_lp_tight(2.0).unwrap().value < 2.59);
//! ```

pub mod bench;
pub mod bounds;
pub mod cli;
pub mod cost;
pub mod error;
pub mod instance;
pub mod io;
pub mod local;
pub mod lp;
pub mod oracle;
pub mod partition;
pub mod points;
pub mod reduce;
pub mod rng;
pub mod round;
pub mod solution;
pub mod triangle;

pub use error::{Error, Result};
pub use instance::{KMedianInstance, Metric};
pub use partition::Partition;
pub use points::PointSet;
pub use solution::ClusteringSolution;
