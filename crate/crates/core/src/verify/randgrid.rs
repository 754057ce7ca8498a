//! Random dyadic two-set grids for the identity checks.
//!
//! Step sizes are arbitrary positive integers in ticks (the coefficient
//! formulas do not require powers of two), optionally scaled to exercise
//! different dyadic magnitudes.

use crate::time_grid::{Resolution, StepSequence, UnionGrid};
use rand::Rng;

/// A random synchronized two-set grid with at least `order + 1` times per
/// set on each side of the shared start.
pub fn random_two_set_grid(rng: &mut impl Rng, order: usize) -> UnionGrid {
    let scale = 1i64 << rng.gen_range(0..4);
    let start = rng.gen_range(-1000..1000) * scale;
    let mut make = |set_id: usize| {
        let n = rng.gen_range(2 * order + 2..2 * order + 8);
        let mut t = start;
        let mut ticks = vec![t];
        for _ in 0..n {
            t += rng.gen_range(1..24) * scale;
            ticks.push(t);
        }
        StepSequence::from_ticks(set_id, &ticks, Resolution::new(-20))
    };
    let a = make(0);
    let b = make(1);
    UnionGrid::merge(&[a, b]).expect("generated grids are valid")
}

/// Union indices of `grid` where an order-k small step has full history.
pub fn valid_union_steps(grid: &UnionGrid, order: usize) -> Vec<usize> {
    let len = grid.union_ticks().len();
    (0..len.saturating_sub(1))
        .filter(|&n| n + 1 >= order && (0..grid.num_sets()).all(|s| grid.m_of(s, n) + 1 >= order))
        .collect()
}

/// Step indices of `set` whose full accumulated table has history at the
/// given order.
pub fn valid_full_steps(grid: &UnionGrid, order: usize, set: usize) -> Vec<usize> {
    let ticks = grid.set_ticks(set).unwrap();
    let valid = valid_union_steps(grid, order);
    (0..ticks.len() - 1)
        .filter(|&m| {
            let n0 = grid.n_of(set, m);
            let n1 = grid.n_of(set, m + 1);
            (n0..n1).all(|n| valid.contains(&n))
        })
        .collect()
}
