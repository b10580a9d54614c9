//! Closed-form approximation guarantees as functions of `β`, the factor by
//! which the number of opened centers may exceed `k`.
//!
//! * [`alpha_lp_closed`]: the closed-form guarantee of the LP rounding.
//! * [`alpha_lp_tight`]: the sharper bound on `E[d(x, f(x))] / R_x`,
//!   maximized over `γ ∈ [0, 1]`.
//! * [`alpha_local`]: the local search guarantee with swaps of size `p`.
//! * [`alpha_pipage`]: the guarantee of the pipage-rounding variant.
//! * [`alpha_envelope`]: the best of the three algorithms at a given `β`.

use serde::Serialize;

use crate::{Error, Result};

/// Version tag written next to every bound in experiment reports.
pub const VERSION: &str = concat!("bounds-", env!("CARGO_PKG_VERSION"));

const GRID_STEP: f64 = 1e-4;
const GAMMA_TOL: f64 = 1e-7;

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be a finite number > 1, got {beta}")))
    }
}

/// `1 + e^{−β} (6β/(β−1) + (β−1)²/β)`.
pub fn alpha_lp_closed(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 + (-beta).exp() * (6.0 * beta / (beta - 1.0) + (beta - 1.0).powi(2) / beta))
}

/// The closed form with the `6β/(1−β)` denominator exactly as it is usually
/// printed. Negative for moderate `β`; exposed for comparison only.
pub fn alpha_lp_as_printed(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(1.0 + (-beta).exp() * (6.0 * beta / (1.0 - beta) + (beta - 1.0).powi(2) / beta))
}

/// `(1 − e^γ(1 − γ)) / γ`, continuous at 0 where it vanishes.
fn boundary_term(gamma: f64) -> f64 {
    if gamma < 1e-3 {
        // 1 − e^γ(1−γ) = Σ_{n≥2} (n−1) γⁿ / n!
        let mut term = gamma; // γ^{n-1}/n! · n! bookkeeping below
        let mut fact = 2.0;
        let mut sum = 0.0;
        for n in 2..12 {
            sum += (n as f64 - 1.0) * term / fact;
            term *= gamma;
            fact *= (n + 1) as f64;
        }
        sum
    } else {
        (1.0 - gamma.exp() * (1.0 - gamma)) / gamma
    }
}

/// The expression maximized by [`alpha_lp_tight`], at a fixed `γ`.
pub fn lp_tight_objective(beta: f64, gamma: f64) -> f64 {
    let a = beta / (beta - 1.0);
    let b = 2.0 * beta / (beta - gamma);
    (1.0 - (-beta).exp())
        + 3.0 * (-(beta - gamma)).exp() * (1.0 - gamma) * (a + a.max(b))
        + beta * (-beta).exp() * boundary_term(gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightBound {
    pub value: f64,
    pub argmax_gamma: f64,
}

/// Maximizes [`lp_tight_objective`] over `γ ∈ [0, 1]`: a grid with step
/// 1e-4 followed by golden-section refinement around the best grid point.
pub fn alpha_lp_tight(beta: f64) -> Result<TightBound> {
    check_beta(beta)?;
    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut best = TightBound { value: f64::NEG_INFINITY, argmax_gamma: 0.0 };
    for s in 0..=steps {
        let g = s as f64 / steps as f64;
        let v = lp_tight_objective(beta, g);
        if v > best.value {
            best = TightBound { value: v, argmax_gamma: g };
        }
    }

    let (mut lo, mut hi) = ((best.argmax_gamma - GRID_STEP).max(0.0), (best.argmax_gamma + GRID_STEP).min(1.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut fc, mut fd) = (lp_tight_objective(beta, c), lp_tight_objective(beta, d));
    while hi - lo > GAMMA_TOL {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = lp_tight_objective(beta, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = lp_tight_objective(beta, d);
        }
    }
    let g = 0.5 * (lo + hi);
    let v = lp_tight_objective(beta, g);
    if v > best.value {
        best = TightBound { value: v, argmax_gamma: g };
    }
    Ok(best)
}

/// `(1 + 2/β + 2/(βp))² / (1 − eps_term)`.
pub fn alpha_local(beta: f64, p: u64, eps_term: f64) -> Result<f64> {
    check_beta(beta)?;
    if p == 0 {
        return Err(Error::Domain("swap size p must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&eps_term) {
        return Err(Error::Domain(format!("eps_term must lie in [0, 1), got {eps_term}")));
    }
    let base = 1.0 + 2.0 / beta + 2.0 / (beta * p as f64);
    Ok(base * base / (1.0 - eps_term))
}

/// `(1 + 2/β)²`: the local search guarantee as `p → ∞`.
pub fn alpha_local_limit(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((1.0 + 2.0 / beta).powi(2))
}

/// `max(1 + 8e^{−β}, β(e^{−1} + 8e^{−β})/(β − 1))`.
pub fn alpha_pipage(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (first, second) = pipage_branches(beta);
    Ok(first.max(second))
}

fn pipage_branches(beta: f64) -> (f64, f64) {
    let e = (-beta).exp();
    (1.0 + 8.0 * e, beta * ((-1f64).exp() + 8.0 * e) / (beta - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LpRounding,
    LocalSearch,
    Pipage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub value: f64,
    pub attained_by: Algorithm,
}

/// Best guarantee over the three algorithms: LP rounding (tight form), local
/// search with unbounded swap size, and pipage rounding.
pub fn alpha_envelope(beta: f64) -> Result<Envelope> {
    let candidates = [
        (alpha_lp_tight(beta)?.value, Algorithm::LpRounding),
        (alpha_local_limit(beta)?, Algorithm::LocalSearch),
        (alpha_pipage(beta)?, Algorithm::Pipage),
    ];
    let (value, attained_by) = candidates
        .into_iter()
        .fold((f64::INFINITY, Algorithm::LpRounding), |acc, c| if c.0 < acc.0 { c } else { acc });
    Ok(Envelope { value, attained_by })
}

/// One row of the `bounds` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub beta: f64,
    pub alpha_lp_closed: f64,
    pub alpha_lp_tight: f64,
    pub alpha_local: Vec<f64>,
    pub alpha_pipage: f64,
    pub alpha_lp_as_printed: f64,
}

pub fn bound_row(beta: f64, swap_sizes: &[u64]) -> Result<BoundRow> {
    Ok(BoundRow {
        beta,
        alpha_lp_closed: alpha_lp_closed(beta)?,
        alpha_lp_tight: alpha_lp_tight(beta)?.value,
        alpha_local: swap_sizes.iter().map(|&p| alpha_local(beta, p, 0.0)).collect::<Result<_>>()?,
        alpha_pipage: alpha_pipage(beta)?,
        alpha_lp_as_printed: alpha_lp_as_printed(beta)?,
    })
}
