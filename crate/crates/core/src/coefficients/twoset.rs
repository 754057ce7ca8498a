//! Collapsed two-set form of the small-step coefficients.
//!
//! When exactly two sets are coupled, every union time is an evaluation time
//! of the first set, the second, or both, and the corresponding Lagrange
//! factor collapses to a Kronecker delta.  The table splits into three
//! contributions selected by which sets evaluate at each recent union time.
//! The result is entrywise identical to the general multi-set formula.

use super::beta::{BetaTable, TableKind, Window};
use super::lagrange::lagrange_eval;
use super::{ab::ab_coefficients_ticks, CoeffError, CoeffScalar};
use crate::time_grid::{SetSelection, UnionGrid};
/// Small-step coefficient table for a two-set grid via the collapsed
/// selection-function decomposition.
pub fn two_set_beta<T: CoeffScalar>(
    grid: &UnionGrid,
    k: usize,
    n: usize,
) -> Result<BetaTable<T>, CoeffError> {
    if grid.num_sets() != 2 {
        return Err(CoeffError::WrongSetCount);
    }
    assert!(k >= 1, "order must be at least one");
    let u = grid.union_ticks();
    if n + 1 >= u.len() || n + 1 < k {
        return Err(CoeffError::InsufficientHistory);
    }
    for s in 0..2 {
        if grid.m_of(s, n) + 1 < k {
            return Err(CoeffError::InsufficientHistory);
        }
    }

    let past: Vec<i64> = (0..k).map(|i| u[n - i]).collect();
    let alpha = ab_coefficients_ticks::<T>(&past, u[n + 1])?;
    let step = T::from_int(u[n + 1] - u[n]);

    let m = [grid.m_of(0, n), grid.m_of(1, n)];
    let ticks = [grid.set_ticks(0)?, grid.set_ticks(1)?];
    let nodes: [Vec<T>; 2] = [
        (0..k).map(|d| T::from_int(ticks[0][m[0] - d])).collect(),
        (0..k).map(|d| T::from_int(ticks[1][m[1] - d])).collect(),
    ];

    let mut windows = Vec::with_capacity(2);
    for s in 0..2 {
        let mut w: Vec<i64> = (0..k).map(|d| ticks[s][m[s] - d]).collect();
        w.reverse();
        windows.push(Window {
            first_index: m[s] + 1 - k,
            ticks: w,
        });
    }
    let mut table = BetaTable::new(
        TableKind::SmallStep {
            union_index: n,
            start_tick: u[n],
            end_tick: u[n + 1],
        },
        k,
        windows,
    );

    for i in 0..k {
        let ui = n - i;
        let weight = step.clone() * alpha.alpha[i].clone();
        match grid.two_set_selection(ui)? {
            SetSelection::Both => {
                // both Lagrange factors collapse: one diagonal entry
                let q = vec![grid.m_of(0, ui), grid.m_of(1, ui)];
                table.add(q, weight);
            }
            SetSelection::FirstOnly => {
                // the first set's factor collapses; interpolate on the second
                let qa = grid.m_of(0, ui);
                let t = T::from_int(ticks[0][qa]);
                for d in 0..k {
                    let l = lagrange_eval(&t, &nodes[1], d)?;
                    table.add(vec![qa, m[1] - d], weight.clone() * l);
                }
            }
            SetSelection::SecondOnly => {
                let qb = grid.m_of(1, ui);
                let t = T::from_int(ticks[1][qb]);
                for d in 0..k {
                    let l = lagrange_eval(&t, &nodes[0], d)?;
                    table.add(vec![m[0] - d, qb], weight.clone() * l);
                }
            }
        }
    }
    Ok(table)
}
