//! Exact-rational primal simplex for the routing relaxation.
//!
//! The relaxation minimizes `K` over clique rows
//! `sum_{(p,+) in C} w_p x_p + sum_{(p,-) in C} w_p (1 - x_p) <= K` with
//! `x in [0,1]`. Substituting `K = W - K'` (`W` the total demand weight)
//! turns every row into `sum_p (+/-w_p) x_p + K' <= W - W_C^-` with a
//! nonnegative right-hand side, so maximizing `K'` from the all-slack basis
//! needs no phase one. Box rows `x_p <= 1` and the safety row `K' <= W`
//! complete the tableau.
//!
//! Pivoting: Dantzig's rule until a run of degenerate pivots, then Bland's
//! rule permanently, which guarantees termination.

use num_traits::{One, Signed, Zero};

use super::CliqueConstraint;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{Instance, RouteSide};

pub(crate) struct SimplexOutcome {
    pub xs: Vec<Rational>,
    pub k: Rational,
    pub pivots: u64,
}

const PIVOT_CAP: u64 = 500_000;

pub(crate) fn solve_relaxation_lp(
    instance: &Instance,
    constraints: &[CliqueConstraint],
) -> Result<SimplexOutcome> {
    let m = instance.demand_count();
    let total = instance.total_weight();
    let structural = m + 1; // x_0 .. x_{m-1}, K'
    let kp_col = m;
    let rows = constraints.len() + m + 1;
    let cols = structural + rows + 1; // slacks, then the right-hand side
    let rhs_col = cols - 1;

    let mut tableau = vec![vec![Rational::zero(); cols]; rows];
    for (r, constraint) in constraints.iter().enumerate() {
        let mut minus_weight = Rational::zero();
        for &(p, side) in constraint.members() {
            let w = instance.demands()[p].weight();
            match side {
                RouteSide::Plus => tableau[r][p] += w,
                RouteSide::Minus => {
                    tableau[r][p] -= w;
                    minus_weight += w;
                }
            }
        }
        tableau[r][kp_col] = Rational::one();
        tableau[r][rhs_col] = &total - minus_weight;
        debug_assert!(!tableau[r][rhs_col].is_negative());
    }
    for p in 0..m {
        let r = constraints.len() + p;
        tableau[r][p] = Rational::one();
        tableau[r][rhs_col] = Rational::one();
    }
    let safety = constraints.len() + m;
    tableau[safety][kp_col] = Rational::one();
    tableau[safety][rhs_col] = total.clone();
    for (r, row) in tableau.iter_mut().enumerate() {
        row[structural + r] = Rational::one();
    }

    let mut objective = vec![Rational::zero(); cols];
    objective[kp_col] = Rational::one();

    let mut basis: Vec<usize> = (0..rows).map(|r| structural + r).collect();
    let mut pivots = 0u64;
    let mut degenerate_run = 0u64;
    let mut bland = false;
    let stall_threshold = 2 * (rows + cols) as u64;

    loop {
        let entering = if bland {
            (0..cols - 1).find(|&j| objective[j].is_positive())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..cols - 1 {
                if objective[j].is_positive()
                    && best.is_none_or(|b| objective[j] > objective[b])
                {
                    best = Some(j);
                }
            }
            best
        };
        let Some(enter) = entering else {
            break;
        };

        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            if !tableau[r][enter].is_positive() {
                continue;
            }
            let ratio = &tableau[r][rhs_col] / &tableau[r][enter];
            let take = match &leave {
                None => true,
                Some((prev, best)) => {
                    ratio < *best || (ratio == *best && basis[r] < basis[*prev])
                }
            };
            if take {
                leave = Some((r, ratio));
            }
        }
        let Some((pivot_row, ratio)) = leave else {
            return Err(Error::Internal(
                "relaxation is unbounded; a clique row must bound K'".into(),
            ));
        };

        if ratio.is_zero() {
            degenerate_run += 1;
            if degenerate_run > stall_threshold {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }

        let pivot_value = tableau[pivot_row][enter].clone();
        for entry in tableau[pivot_row].iter_mut() {
            if !entry.is_zero() {
                *entry /= &pivot_value;
            }
        }
        let pivot_data = tableau[pivot_row].clone();
        for (r, row) in tableau.iter_mut().enumerate() {
            if r == pivot_row || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (entry, pivot_entry) in row.iter_mut().zip(&pivot_data) {
                if !pivot_entry.is_zero() {
                    *entry -= &factor * pivot_entry;
                }
            }
        }
        if !objective[enter].is_zero() {
            let factor = objective[enter].clone();
            for (entry, pivot_entry) in objective.iter_mut().zip(&pivot_data) {
                if !pivot_entry.is_zero() {
                    *entry -= &factor * pivot_entry;
                }
            }
        }
        basis[pivot_row] = enter;

        pivots += 1;
        if pivots > PIVOT_CAP {
            return Err(Error::Internal(format!(
                "simplex exceeded {PIVOT_CAP} pivots"
            )));
        }
    }

    let mut values = vec![Rational::zero(); structural];
    for (r, &var) in basis.iter().enumerate() {
        if var < structural {
            values[var] = tableau[r][rhs_col].clone();
        }
    }
    let xs = values[..m].to_vec();
    debug_assert!(xs
        .iter()
        .all(|x| !x.is_negative() && *x <= Rational::one()));
    let k = &total - &values[kp_col];
    Ok(SimplexOutcome { xs, k, pivots })
}
