//! Exact rational linear programming, used for redundancy tests.
//!
//! Two-phase dense simplex with Bland's rule over `BigRational`. There is no
//! floating point anywhere, so no tolerances and no cycling. The systems this
//! crate solves are tiny (tens of rows and columns), which dense tableaus
//! handle comfortably.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::halfspace::Halfspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(BigRational),
}

/// Maximizes `objective . x` over `{ x : h.normal . x <= h.offset for all h }`
/// with `x` free. Exact in all branches.
pub(crate) fn maximize(objective: &[BigInt], constraints: &[&Halfspace]) -> Result<LpOutcome> {
    let dim = objective.len();
    for h in constraints {
        if h.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "LP constraint dimension {} does not match objective dimension {dim}",
                h.dim()
            )));
        }
    }
    if constraints.is_empty() {
        return Ok(if objective.iter().all(Zero::is_zero) {
            LpOutcome::Optimal(BigRational::zero())
        } else {
            LpOutcome::Unbounded
        });
    }

    // Free variables split as x = u - w; columns: 2*dim structural,
    // then one slack per row, then artificials for rows with negative rhs.
    let m = constraints.len();
    let slack_start = 2 * dim;
    let art_start = slack_start + m;
    let mut n_art = 0;

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);

    for (i, h) in constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); art_start];
        for (j, a) in h.normal().iter().enumerate() {
            row[j] = BigRational::from(a.clone());
            row[dim + j] = -&row[j];
        }
        row[slack_start + i] = BigRational::one();
        let mut b = BigRational::from(h.offset().clone());
        if b.is_negative() {
            for c in &mut row {
                *c = -&*c;
            }
            b = -b;
            basis.push(art_start + n_art);
            n_art += 1;
        } else {
            basis.push(slack_start + i);
        }
        rows.push(row);
        rhs.push(b);
    }

    let ncols = art_start + n_art;
    let mut art_seen = 0;
    for (r, row) in rows.iter_mut().enumerate() {
        row.resize(ncols, BigRational::zero());
        if basis[r] >= art_start {
            row[art_start + art_seen] = BigRational::one();
            art_seen += 1;
        }
    }

    let mut tab = Tableau { rows, rhs, basis, ncols };

    if n_art > 0 {
        let mut phase1 = vec![BigRational::zero(); ncols];
        for c in &mut phase1[art_start..] {
            *c = -BigRational::one();
        }
        match tab.run(&phase1, ncols) {
            RunResult::Optimal => {}
            RunResult::Unbounded => {
                return Err(Error::Internal("phase-1 LP cannot be unbounded".into()))
            }
        }
        if tab.objective_value(&phase1).is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        tab.drive_out_artificials(art_start);
    }

    let mut phase2 = vec![BigRational::zero(); ncols];
    for (j, c) in objective.iter().enumerate() {
        phase2[j] = BigRational::from(c.clone());
        phase2[dim + j] = -&phase2[j];
    }
    match tab.run(&phase2, art_start) {
        RunResult::Unbounded => Ok(LpOutcome::Unbounded),
        RunResult::Optimal => Ok(LpOutcome::Optimal(tab.objective_value(&phase2))),
    }
}

enum RunResult {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn objective_value(&self, obj: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &obj[b] * v)
            .sum()
    }

    fn reduced_cost(&self, obj: &[BigRational], col: usize) -> BigRational {
        let mut cost = obj[col].clone();
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_zero() && !obj[self.basis[r]].is_zero() {
                cost -= &obj[self.basis[r]] * &row[col];
            }
        }
        cost
    }

    /// Bland's rule simplex over columns `< col_limit`.
    fn run(&mut self, obj: &[BigRational], col_limit: usize) -> RunResult {
        loop {
            let entering = (0..col_limit)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(obj, j).is_positive());
            let Some(col) = entering else {
                return RunResult::Optimal;
            };

            let mut leave: Option<(usize, BigRational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return RunResult::Unbounded;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pv = self.rows[row][col].clone();
        for c in &mut self.rows[row] {
            *c /= &pv;
        }
        self.rhs[row] /= &pv;
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..self.ncols {
                let sub = &factor * &self.rows[row][c];
                self.rows[r][c] -= sub;
            }
            let sub = &factor * &self.rhs[row];
            self.rhs[r] -= sub;
        }
        self.basis[row] = col;
    }

    /// After a zero-value phase 1, pivot basic artificials onto real columns,
    /// dropping rows that turn out to be identically zero.
    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < art_start {
                r += 1;
                continue;
            }
            let col = (0..art_start).find(|&j| !self.rows[r][j].is_zero());
            match col {
                Some(col) => {
                    self.pivot(r, col);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}
