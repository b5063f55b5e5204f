//! Exact rational linear programming.
//!
//! Solves `min c·x s.t. a_r·x >= b_r` over free variables by running a
//! two-phase tableau simplex with Bland's rule on the dual
//! `max b·y s.t. Σ y_r a_r = c, y >= 0`. The tableau has one row per
//! variable, so problems with few variables and many constraints (the cutting
//! plane setting) stay small. The primal vertex is recovered from the optimal
//! dual basis by solving the `n` active rows.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::lex::LinearInequality;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    /// The constraint normals do not positively span the objective, so the
    /// feasible region (if any) is unbounded in an improving direction.
    #[error("linear program is unbounded or its constraints do not bound the variables")]
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v /= &piv;
            }
        }
        self.rhs[row] /= &piv;
        let (pivot_row, pivot_rhs) = (self.rows[row].clone(), self.rhs[row].clone());
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[Rational], col: usize) -> Rational {
        let mut rc = cost[col].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][col].is_zero() {
                rc -= &cost[b] * &self.rows[i][col];
            }
        }
        rc
    }

    /// Runs Bland's rule over columns `0..active`. Returns `false` when the
    /// objective is unbounded below.
    fn optimize(&mut self, cost: &[Rational], active: usize) -> bool {
        loop {
            let Some(col) = (0..active)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative())
            else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.cmp(br) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

pub fn minimize(objective: &[Rational], rows: &[LinearInequality]) -> Result<LpOutcome, LpError> {
    let n = objective.len();
    let m = rows.len();
    debug_assert!(rows.iter().all(|r| r.dim() == n));

    // Dual equality system Aᵀ y = c with artificials m..m+n.
    let mut tab = Tableau {
        rows: Vec::with_capacity(n),
        rhs: Vec::with_capacity(n),
        basis: (m..m + n).collect(),
    };
    for j in 0..n {
        let flip = objective[j].is_negative();
        let mut row: Vec<Rational> = rows
            .iter()
            .map(|r| {
                if flip {
                    -&r.coeffs[j]
                } else {
                    r.coeffs[j].clone()
                }
            })
            .collect();
        row.extend((0..n).map(|i| {
            if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        tab.rows.push(row);
        tab.rhs.push(objective[j].abs());
    }

    let mut phase1 = vec![Rational::zero(); m];
    phase1.extend(std::iter::repeat_n(Rational::from_integer(1.into()), n));
    tab.optimize(&phase1, m + n);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&b, _)| b >= m)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        return Err(LpError::Unbounded);
    }
    for i in 0..n {
        if tab.basis[i] >= m {
            let col = (0..m)
                .find(|&j| !tab.rows[i][j].is_zero() && !tab.basis.contains(&j))
                .ok_or(LpError::Unbounded)?;
            tab.pivot(i, col);
        }
    }

    let mut phase2: Vec<Rational> = rows.iter().map(|r| -&r.rhs).collect();
    phase2.extend(std::iter::repeat_n(Rational::zero(), n));
    if !tab.optimize(&phase2, m) {
        return Ok(LpOutcome::Infeasible);
    }

    let active: Vec<&LinearInequality> = tab.basis.iter().map(|&b| &rows[b]).collect();
    let point = solve_active(&active).ok_or(LpError::Unbounded)?;
    let value = crate::rational::dot(objective, &point);
    Ok(LpOutcome::Optimal { point, value })
}

/// Solves `a_i · x = b_i` for a square nonsingular system.
fn solve_active(rows: &[&LinearInequality]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            v
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let piv = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &piv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let d = &f * &a[col][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
