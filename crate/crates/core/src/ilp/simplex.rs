//! Dense two-phase primal simplex, generic over the scalar type.
//!
//! Bland's rule is used for both the entering and the leaving choice, so the
//! iteration cannot cycle. Phase 1 introduces artificial variables only for
//! rows whose right-hand side is negative after slack insertion; redundant
//! rows discovered at the phase transition are dropped.

use crate::scalar::LpScalar;

/// A maximization problem: `max c.x` subject to `A x <= b`, `x >= 0`.
/// Rows are sparse (column, coefficient) lists; `b` may have any sign.
#[derive(Debug, Clone)]
pub struct DenseLp<T> {
    pub n_vars: usize,
    pub rows: Vec<(Vec<(usize, T)>, T)>,
    pub objective: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexOutcome<T> {
    Optimal { values: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    reduced: Vec<T>,
    objective: T,
    basis: Vec<usize>,
    blocked: Vec<bool>,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for value in self.rows[row].iter_mut() {
            *value = value.clone() / pivot.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / pivot;

        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.rows[r].len() {
                let delta = factor.clone() * self.rows[row][c].clone();
                self.rows[r][c] = self.rows[r][c].clone() - delta;
            }
            self.rhs[r] = self.rhs[r].clone() - factor * self.rhs[row].clone();
        }

        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for c in 0..self.reduced.len() {
                let delta = factor.clone() * self.rows[row][c].clone();
                self.reduced[c] = self.reduced[c].clone() - delta;
            }
            self.objective = self.objective.clone() + factor * self.rhs[row].clone();
        }
        self.basis[row] = col;
    }

    /// Bland: entering column is the lowest-index unblocked column with a
    /// positive reduced cost; leaving row minimizes the ratio, ties broken by
    /// the lowest basis column. Returns false once optimal.
    fn step(&mut self) -> Result<bool, ()> {
        let entering = (0..self.reduced.len())
            .find(|&c| !self.blocked[c] && self.reduced[c].gt_approx(&T::zero()));
        let Some(col) = entering else {
            return Ok(false);
        };

        let mut leaving: Option<(usize, T)> = None;
        for r in 0..self.rows.len() {
            let coef = &self.rows[r][col];
            if !coef.gt_approx(&T::zero()) {
                continue;
            }
            let ratio = self.rhs[r].clone() / coef.clone();
            let replace = match &leaving {
                None => true,
                Some((best_row, best_ratio)) => {
                    best_ratio.gt_approx(&ratio)
                        || (!ratio.gt_approx(best_ratio) && self.basis[r] < self.basis[*best_row])
                }
            };
            if replace {
                leaving = Some((r, ratio));
            }
        }
        match leaving {
            Some((row, _)) => {
                self.pivot(row, col);
                Ok(true)
            }
            None => Err(()), // unbounded in the entering direction
        }
    }

    fn run(&mut self) -> Result<(), ()> {
        while self.step()? {}
        Ok(())
    }
}

/// Solves the LP; all comparisons use the scalar's tolerance, so the
/// rational instantiation is exact.
pub fn solve<T: LpScalar>(lp: &DenseLp<T>) -> SimplexOutcome<T> {
    let n = lp.n_vars;
    let m = lp.rows.len();

    // Dense constraint rows, negated where the right-hand side is negative.
    let mut dense: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut negated: Vec<bool> = Vec::with_capacity(m);
    for (sparse, b) in &lp.rows {
        let mut row = vec![T::zero(); n];
        for (col, coef) in sparse {
            row[*col] = row[*col].clone() + coef.clone();
        }
        let negate = T::zero().gt_approx(b);
        if negate {
            for value in row.iter_mut() {
                *value = -value.clone();
            }
        }
        rhs.push(if negate { -b.clone() } else { b.clone() });
        dense.push(row);
        negated.push(negate);
    }

    let artificial_rows: Vec<usize> = (0..m).filter(|&i| negated[i]).collect();
    let n_art = artificial_rows.len();
    let total = n + m + n_art;

    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let mut art_index = 0usize;
    for i in 0..m {
        let mut row = vec![T::zero(); total];
        row[..n].clone_from_slice(&dense[i]);
        // Slack for `<=` rows, surplus for negated rows.
        row[n + i] = if negated[i] { -T::one() } else { T::one() };
        if negated[i] {
            let col = n + m + art_index;
            row[col] = T::one();
            basis[i] = col;
            art_index += 1;
        } else {
            basis[i] = n + i;
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        rhs,
        reduced: vec![T::zero(); total],
        objective: T::zero(),
        basis,
        blocked: vec![false; total],
    };

    if n_art > 0 {
        // Phase 1: maximize minus the artificial sum, priced out over the
        // starting basis.
        for c in n + m..total {
            tableau.reduced[c] = -T::one();
        }
        for r in 0..m {
            if tableau.basis[r] >= n + m {
                for c in 0..total {
                    tableau.reduced[c] = tableau.reduced[c].clone() + tableau.rows[r][c].clone();
                }
                tableau.objective = tableau.objective.clone() - tableau.rhs[r].clone();
            }
        }
        if tableau.run().is_err() {
            // Phase-1 objective is bounded above by zero; reaching this
            // means the model is malformed.
            return SimplexOutcome::Infeasible;
        }
        if T::zero().gt_approx(&tableau.objective) {
            return SimplexOutcome::Infeasible;
        }
        // Remove artificials from the basis; rows that cannot pivot them out
        // are redundant and dropped.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= n + m {
                let col = (0..n + m).find(|&c| !tableau.rows[r][c].is_zero_approx());
                match col {
                    Some(c) => tableau.pivot(r, c),
                    None => {
                        tableau.rows.remove(r);
                        tableau.rhs.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for c in n + m..total {
            tableau.blocked[c] = true;
        }
    }

    // Phase 2: the real objective, priced out over the current basis.
    tableau.reduced = vec![T::zero(); total];
    tableau.objective = T::zero();
    for (c, coef) in lp.objective.iter().enumerate() {
        tableau.reduced[c] = coef.clone();
    }
    for r in 0..tableau.rows.len() {
        let b = tableau.basis[r];
        let cost = if b < n {
            lp.objective[b].clone()
        } else {
            T::zero()
        };
        if cost.is_zero() {
            continue;
        }
        for c in 0..total {
            let delta = cost.clone() * tableau.rows[r][c].clone();
            tableau.reduced[c] = tableau.reduced[c].clone() - delta;
        }
        tableau.objective = tableau.objective.clone() + cost * tableau.rhs[r].clone();
    }
    if tableau.run().is_err() {
        return SimplexOutcome::Unbounded;
    }

    let mut values = vec![T::zero(); n];
    for r in 0..tableau.rows.len() {
        if tableau.basis[r] < n {
            values[tableau.basis[r]] = tableau.rhs[r].clone();
        }
    }
    SimplexOutcome::Optimal {
        values,
        objective: tableau.objective,
    }
}
