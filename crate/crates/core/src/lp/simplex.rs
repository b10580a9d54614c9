//! Dense two-phase primal simplex on a full tableau.
//!
//! Pricing is Dantzig's rule; after `10 × (#variables)` consecutive
//! degenerate pivots the phase switches to Bland's rule, which cannot cycle.
//! Row updates skip rows whose pivot-column entry is zero and only touch the
//! nonzero entries of the pivot row, which keeps the k-median tableaux cheap
//! while they are still sparse.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `min objective·x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Reduced-cost and feasibility tolerance.
    pub tol: f64,
    pub pivot_tol: f64,
    pub max_iters: usize,
    /// Refuse tableaux with more entries than this.
    pub max_entries: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { tol: 1e-9, pivot_tol: 1e-9, max_iters: 200_000, max_entries: 25_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Dantzig,
    Bland,
}

struct Tableau {
    width: usize, // columns + rhs
    rows: usize,  // constraint rows (objective row stored after them)
    data: Vec<f64>,
    basis: Vec<usize>,
    rhs_col: usize,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    fn obj_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let piv = self.at(r, c);
        let inv = 1.0 / piv;
        let mut nz = Vec::new();
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            for (j, v) in row.iter_mut().enumerate() {
                if *v != 0.0 {
                    *v *= inv;
                    nz.push(j);
                }
            }
            row[c] = 1.0;
        }
        let pivot_row: Vec<(usize, f64)> = nz.iter().map(|&j| (j, self.data[r * w + j])).collect();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for &(j, pv) in &pivot_row {
                let v = row[j] - f * pv;
                row[j] = if v.abs() < 1e-14 { 0.0 } else { v };
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Entering column under `rule`, restricted to `allowed` columns.
    fn entering(&self, rule: Rule, allowed: usize, banned: &[bool], tol: f64) -> Option<usize> {
        let obj = self.row(self.obj_row());
        match rule {
            Rule::Bland => (0..allowed).find(|&j| !banned[j] && obj[j] < -tol),
            Rule::Dantzig => {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..allowed {
                    if !banned[j] && obj[j] < -tol && best.is_none_or(|(_, v)| obj[j] < v) {
                        best = Some((j, obj[j]));
                    }
                }
                best.map(|(j, _)| j)
            }
        }
    }

    /// Leaving row for entering column `c`; `None` if the column is unbounded.
    fn leaving(&self, c: usize, rule: Rule, pivot_tol: f64) -> Option<usize> {
        let mut best: Option<(usize, f64, f64)> = None; // (row, ratio, pivot)
        for i in 0..self.rows {
            let a = self.at(i, c);
            if a <= pivot_tol {
                continue;
            }
            let ratio = self.at(i, self.rhs_col).max(0.0) / a;
            let replace = match best {
                None => true,
                Some((bi, br, ba)) => {
                    if ratio < br - 1e-12 * (1.0 + br.abs()) {
                        true
                    } else if ratio <= br + 1e-12 * (1.0 + br.abs()) {
                        match rule {
                            Rule::Bland => self.basis[i] < self.basis[bi],
                            Rule::Dantzig => a > ba,
                        }
                    } else {
                        false
                    }
                }
            };
            if replace {
                best = Some((i, ratio, a));
            }
        }
        best.map(|(i, _, _)| i)
    }

    fn objective_value(&self) -> f64 {
        -self.at(self.obj_row(), self.rhs_col)
    }
}

struct Runner<'a> {
    opts: &'a SimplexOptions,
    iterations: usize,
    degenerate_limit: usize,
}

impl Runner<'_> {
    /// Runs simplex iterations until optimal. `allowed` bounds the columns
    /// that may enter.
    fn optimize(&mut self, t: &mut Tableau, allowed: usize, banned: &[bool]) -> Result<()> {
        let mut rule = Rule::Dantzig;
        let mut degenerate_run = 0usize;
        loop {
            let Some(c) = t.entering(rule, allowed, banned, self.opts.tol) else {
                return Ok(());
            };
            let Some(r) = t.leaving(c, rule, self.opts.pivot_tol) else {
                return Err(Error::LpUnbounded);
            };
            if self.iterations >= self.opts.max_iters {
                return Err(Error::LpStall { iterations: self.iterations, best_value: None });
            }
            let step = t.at(r, t.rhs_col) / t.at(r, c);
            if step.abs() <= 1e-12 {
                degenerate_run += 1;
                if rule == Rule::Dantzig && degenerate_run > self.degenerate_limit {
                    rule = Rule::Bland;
                }
            } else {
                degenerate_run = 0;
            }
            t.pivot(r, c);
            self.iterations += 1;
        }
    }
}

pub fn solve(lp: &LinearProgram, opts: &SimplexOptions) -> Result<SimplexSolution> {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    // normalize to nonnegative right-hand sides
    let rows: Vec<(Vec<(usize, f64)>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|c| {
            if let Some(&(j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(Error::Config(format!("constraint references variable {j} of {n}")));
            }
            Ok(if c.rhs < 0.0 {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|&(j, v)| (j, -v)).collect(), flipped, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            })
        })
        .collect::<Result<_>>()?;

    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + n_slack + n_art;
    let width = cols + 1;
    let entries = (m + 1).saturating_mul(width);
    if entries > opts.max_entries {
        return Err(Error::LpTooLarge { rows: m, cols });
    }

    let mut t = Tableau { width, rows: m, data: vec![0.0; entries], basis: vec![0; m], rhs_col: cols };
    let (mut slack, mut art) = (n, n + n_slack);
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        for &(j, v) in coeffs {
            t.data[i * width + j] += v;
        }
        t.data[i * width + cols] = *rhs;
        match rel {
            Relation::Le => {
                t.data[i * width + slack] = 1.0;
                t.basis[i] = slack;
                slack += 1;
            }
            Relation::Ge => {
                t.data[i * width + slack] = -1.0;
                slack += 1;
                t.data[i * width + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
            Relation::Eq => {
                t.data[i * width + art] = 1.0;
                t.basis[i] = art;
                art += 1;
            }
        }
    }
    let is_art = |j: usize| j >= n + n_slack && j < cols;

    let mut runner = Runner { opts, iterations: 0, degenerate_limit: 10 * cols };
    let mut banned = vec![false; cols];

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        let obj = m * width;
        for i in 0..m {
            if is_art(t.basis[i]) {
                for j in 0..width {
                    if !is_art(j) {
                        t.data[obj + j] -= t.data[i * width + j];
                    }
                }
            }
        }
        runner.optimize(&mut t, cols, &banned)?;
        let infeasibility = t.objective_value();
        let scale = 1.0 + rows.iter().map(|r| r.2).sum::<f64>();
        if infeasibility > opts.tol.max(1e-9) * scale {
            return Err(Error::LpInfeasible);
        }
        // drive remaining artificials out of the basis
        let mut redundant = Vec::new();
        for i in 0..m {
            if is_art(t.basis[i]) {
                let col = (0..n + n_slack).find(|&j| t.at(i, j).abs() > opts.pivot_tol);
                match col {
                    Some(j) => t.pivot(i, j),
                    None => redundant.push(i),
                }
            }
        }
        for &i in redundant.iter().rev() {
            t.data.drain(i * width..(i + 1) * width);
            t.basis.remove(i);
            t.rows -= 1;
        }
        for (j, b) in banned.iter_mut().enumerate() {
            *b = is_art(j);
        }
    }

    // Phase 2: the real objective, priced against the current basis.
    let obj = t.rows * width;
    for j in 0..width {
        t.data[obj + j] = if j < n { lp.objective[j] } else { 0.0 };
    }
    for i in 0..t.rows {
        let b = t.basis[i];
        let cb = if b < n { lp.objective[b] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                let v = t.data[i * width + j];
                if v != 0.0 {
                    t.data[obj + j] -= cb * v;
                }
            }
        }
    }
    match runner.optimize(&mut t, cols, &banned) {
        Ok(()) => {}
        Err(Error::LpStall { iterations, .. }) => {
            return Err(Error::LpStall { iterations, best_value: Some(t.objective_value()) });
        }
        Err(e) => return Err(e),
    }

    let mut x = vec![0.0; n];
    for i in 0..t.rows {
        if t.basis[i] < n {
            x[t.basis[i]] = t.at(i, t.rhs_col).max(0.0);
        }
    }
    let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(SimplexSolution { x, value, iterations: runner.iterations })
}
