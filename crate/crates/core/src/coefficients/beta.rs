//! Mixed-time coupling coefficient tables for local time-stepping.
//!
//! One union small step advances the (conceptual) full solution from union
//! time n to n+1 using derivative evaluations at tuples of per-set times,
//! weighted by coefficients built from union-grid Adams-Bashforth
//! coefficients and per-set Lagrange interpolation weights.  Summing the
//! small steps spanned by one full step of a set and normalizing by that
//! set's step size gives the accumulated table actually applied at runtime.

use super::ab::{ab_coefficients_ticks, AbCoeffs};
use super::lagrange::lagrange_eval;
use super::{CoeffError, CoeffScalar};
use crate::time_grid::UnionGrid;
use std::collections::BTreeMap;

/// Identity of a coefficient table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// One union small step; entries carry one factor of the union step
    /// size (in tick units).
    SmallStep {
        union_index: usize,
        start_tick: i64,
        end_tick: i64,
    },
    /// One accumulated full step of `set`; entries are dimensionless.
    FullStep {
        set: usize,
        step: usize,
        start_tick: i64,
        end_tick: i64,
    },
}

/// The per-set index range covered by a table, with the matching tick times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub first_index: usize,
    /// Ticks for indices `first_index..first_index + ticks.len()`, ascending.
    pub ticks: Vec<i64>,
}

impl Window {
    pub fn last_index(&self) -> usize {
        self.first_index + self.ticks.len() - 1
    }

    pub fn index_of_tick(&self, tick: i64) -> Option<usize> {
        self.ticks
            .iter()
            .position(|&t| t == tick)
            .map(|p| self.first_index + p)
    }

    pub fn tick_of_index(&self, index: usize) -> i64 {
        self.ticks[index - self.first_index]
    }
}

/// Sparse table of coefficients indexed by per-set evaluation-time tuples.
///
/// Keys are absolute indices into each set's time sequence; exact zeros are
/// not stored.  Iteration order is ascending lexicographic, which fixes the
/// summation order everywhere the table is consumed.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTable<T> {
    pub kind: TableKind,
    pub order: usize,
    pub windows: Vec<Window>,
    entries: BTreeMap<Vec<usize>, T>,
}

impl<T: CoeffScalar> BetaTable<T> {
    pub fn num_sets(&self) -> usize {
        self.windows.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient at an index tuple (zero when absent).
    pub fn entry(&self, q: &[usize]) -> T {
        self.entries.get(q).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient at a tuple of evaluation times given as ticks.
    pub fn entry_at_ticks(&self, ticks: &[i64]) -> Option<T> {
        let q: Option<Vec<usize>> = self
            .windows
            .iter()
            .zip(ticks)
            .map(|(w, &t)| w.index_of_tick(t))
            .collect();
        q.map(|q| self.entry(&q))
    }

    /// Sum of all entries.
    pub fn sum(&self) -> T {
        self.entries
            .values()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Entrywise equality treating absent entries as zero.
    pub fn same_entries(&self, other: &BetaTable<T>) -> bool {
        let keys: std::collections::BTreeSet<&Vec<usize>> =
            self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().all(|k| self.entry(k) == other.entry(k))
    }

    pub(super) fn new(kind: TableKind, order: usize, windows: Vec<Window>) -> Self {
        BetaTable {
            kind,
            order,
            windows,
            entries: BTreeMap::new(),
        }
    }

    pub(super) fn add(&mut self, q: Vec<usize>, v: T) {
        use std::collections::btree_map::Entry;
        if v.is_zero() {
            return;
        }
        match self.entries.entry(q) {
            Entry::Occupied(mut e) => {
                let updated = e.get().clone() + v;
                if updated.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = updated;
                }
            }
            Entry::Vacant(e) => {
                e.insert(v);
            }
        }
    }

    /// Convert every entry with the scalar's single `to_f64` point.
    pub fn to_f64_table(&self) -> BetaTable<f64> {
        BetaTable {
            kind: self.kind.clone(),
            order: self.order,
            windows: self.windows.clone(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.to_f64()))
                .collect(),
        }
    }
}

fn check_history(grid: &UnionGrid, k: usize, n: usize) -> Result<(), CoeffError> {
    assert!(k >= 1, "order must be at least one");
    if n + 1 >= grid.union_ticks().len() || n + 1 < k {
        return Err(CoeffError::InsufficientHistory);
    }
    for s in 0..grid.num_sets() {
        if grid.m_of(s, n) + 1 < k {
            return Err(CoeffError::InsufficientHistory);
        }
    }
    Ok(())
}

/// Union-grid Adams-Bashforth coefficients for the small step at `n`.
fn union_ab<T: CoeffScalar>(
    grid: &UnionGrid,
    k: usize,
    n: usize,
) -> Result<AbCoeffs<T>, CoeffError> {
    let u = grid.union_ticks();
    let past: Vec<i64> = (0..k).map(|i| u[n - i]).collect();
    ab_coefficients_ticks(&past, u[n + 1])
}

/// The most recent k evaluation ticks of `set` at or before union time `n`,
/// descending.
fn set_nodes(grid: &UnionGrid, k: usize, set: usize, n: usize) -> Vec<i64> {
    let m = grid.m_of(set, n);
    let ticks = grid.set_ticks(set).unwrap();
    (0..k).map(|d| ticks[m - d]).collect()
}

/// Coefficient table for one union small step, via the general multi-set
/// interpolation formula.
pub fn lts_small_step_beta<T: CoeffScalar>(
    grid: &UnionGrid,
    k: usize,
    n: usize,
) -> Result<BetaTable<T>, CoeffError> {
    check_history(grid, k, n)?;
    let u = grid.union_ticks();
    let nsets = grid.num_sets();
    let alpha = union_ab::<T>(grid, k, n)?;
    let step = T::from_int(u[n + 1] - u[n]);

    // weights[s][i][d] = l_d(U[n-i]; k most recent nodes of set s)
    let mut weights: Vec<Vec<Vec<T>>> = Vec::with_capacity(nsets);
    let mut windows = Vec::with_capacity(nsets);
    for s in 0..nsets {
        let nodes_ticks = set_nodes(grid, k, s, n);
        let nodes: Vec<T> = nodes_ticks.iter().map(|&t| T::from_int(t)).collect();
        let mut per_i = Vec::with_capacity(k);
        for i in 0..k {
            let t = T::from_int(u[n - i]);
            let row: Result<Vec<T>, CoeffError> =
                (0..k).map(|d| lagrange_eval(&t, &nodes, d)).collect();
            per_i.push(row?);
        }
        weights.push(per_i);
        let m = grid.m_of(s, n);
        let mut ticks = nodes_ticks;
        ticks.reverse();
        windows.push(Window {
            first_index: m + 1 - k,
            ticks,
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

    // odometer over the k^nsets tuples of per-set backoffs
    let mut backoff = vec![0usize; nsets];
    loop {
        let mut value = T::zero();
        for i in 0..k {
            let mut product = alpha.alpha[i].clone();
            for s in 0..nsets {
                product = product * weights[s][i][backoff[s]].clone();
            }
            value = value + product;
        }
        let value = value * step.clone();
        if !value.is_zero() {
            let q: Vec<usize> = (0..nsets).map(|s| grid.m_of(s, n) - backoff[s]).collect();
            table.add(q, value);
        }
        let mut carry = 0;
        while carry < nsets {
            backoff[carry] += 1;
            if backoff[carry] < k {
                break;
            }
            backoff[carry] = 0;
            carry += 1;
        }
        if carry == nsets {
            break;
        }
    }
    Ok(table)
}

/// Accumulated coefficient table for the full step `m` of `set`: the sum of
/// the spanned union small steps, normalized by the set's own step size.
pub fn accumulate_full_step<T: CoeffScalar>(
    grid: &UnionGrid,
    k: usize,
    set: usize,
    m: usize,
) -> Result<BetaTable<T>, CoeffError> {
    let ticks = grid.set_ticks(set)?;
    if m + 1 >= ticks.len() {
        return Err(CoeffError::UndefinedStep);
    }
    let n0 = grid.n_of(set, m);
    let n1 = grid.n_of(set, m + 1);
    let dt = T::from_int(ticks[m + 1] - ticks[m]);

    let mut table = BetaTable::new(
        TableKind::FullStep {
            set,
            step: m,
            start_tick: ticks[m],
            end_tick: ticks[m + 1],
        },
        k,
        Vec::new(),
    );
    for n in n0..n1 {
        let small = lts_small_step_beta::<T>(grid, k, n)?;
        if table.windows.is_empty() {
            table.windows = small.windows.clone();
        } else {
            for (w, sw) in table.windows.iter_mut().zip(&small.windows) {
                // windows advance monotonically with n; extend at the top
                debug_assert!(sw.first_index >= w.first_index);
                for (idx, &t) in (sw.first_index..).zip(&sw.ticks) {
                    if idx > w.last_index() {
                        w.ticks.push(t);
                    } else {
                        debug_assert_eq!(w.tick_of_index(idx), t);
                    }
                }
            }
        }
        for (q, v) in small.entries() {
            table.add(q.clone(), v.clone() / dt.clone());
        }
    }
    Ok(table)
}

/// Sum an accumulated table over the indices of every other set, returning
/// the per-own-index coefficients.  These must equal the set's own
/// Adams-Bashforth coefficients for the step.
pub fn marginalize_volume<T: CoeffScalar>(
    table: &BetaTable<T>,
    set: usize,
) -> Result<AbCoeffs<T>, CoeffError> {
    let (own_step_ticks, own_m) = match &table.kind {
        TableKind::FullStep {
            set: s,
            step,
            start_tick,
            end_tick,
        } if *s == set => (*end_tick - *start_tick, *step),
        _ => return Err(CoeffError::WrongKind),
    };
    let k = table.order;
    let mut alpha = vec![T::zero(); k];
    for (q, v) in table.entries() {
        let j = own_m - q[set];
        debug_assert!(j < k, "own-set index outside the order window");
        alpha[j] = alpha[j].clone() + v.clone();
    }
    Ok(AbCoeffs {
        alpha,
        step: T::from_int(own_step_ticks),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::scalar::{rat, Rational};
    use crate::time_grid::{Resolution, StepSequence};

    fn two_set_grid(a: &[i64], b: &[i64]) -> UnionGrid {
        let r = Resolution::new(-40);
        UnionGrid::merge(&[
            StepSequence::from_ticks(0, a, r),
            StepSequence::from_ticks(1, b, r),
        ])
        .unwrap()
    }

    /// Steady 2:1 pattern with enough history for orders up to 4:
    /// set A at even ticks, set B at all ticks, window [-8, 4].
    fn steady_21() -> UnionGrid {
        let a: Vec<i64> = (-4..=2).map(|i| 2 * i).collect();
        let b: Vec<i64> = (-8..=4).collect();
        two_set_grid(&a, &b)
    }

    #[test]
    fn identical_grids_collapse_to_diagonal() {
        let g = two_set_grid(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]);
        let k = 3;
        let t: BetaTable<Rational> = lts_small_step_beta(&g, k, 3).unwrap();
        assert_eq!(t.len(), k);
        for i in 0..k {
            // diagonal entries carry the union AB coefficient times the step
            let q = vec![3 - i, 3 - i];
            let expect = match i {
                0 => rat(23, 12),
                1 => rat(-4, 3),
                _ => rat(5, 12),
            };
            assert_eq!(t.entry(&q), expect);
        }
    }

    #[test]
    fn small_step_entries_sum_to_union_step() {
        let g = steady_21();
        for k in 1..=4usize {
            for n in (k + 3)..10 {
                let t: BetaTable<Rational> = lts_small_step_beta(&g, k, n).unwrap();
                let u = g.union_ticks();
                assert_eq!(t.sum(), Rational::from_int(u[n + 1] - u[n]));
            }
        }
    }

    #[test]
    fn order2_small_steps_match_hand_derived_halves() {
        // B's first half step rule: 3/2 at the synchronized tuple and the
        // split -1/4, -1/4 over the two derivative averages.  The union
        // step is one tick here, so the beta entries equal those values.
        let g = steady_21();
        let n0 = g.union_ticks().iter().position(|&t| t == 0).unwrap();
        let t: BetaTable<Rational> = lts_small_step_beta(&g, 2, n0).unwrap();
        assert_eq!(t.entry_at_ticks(&[0, 0]).unwrap(), rat(3, 2));
        assert_eq!(t.entry_at_ticks(&[0, -1]).unwrap(), rat(-1, 4));
        assert_eq!(t.entry_at_ticks(&[-2, -1]).unwrap(), rat(-1, 4));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn order3_full_step_reproduces_2to1_rule() {
        let g = steady_21();
        let a_ticks = g.set_ticks(0).unwrap();
        let m = a_ticks.iter().position(|&t| t == 0).unwrap();
        let t: BetaTable<Rational> = accumulate_full_step(&g, 3, 0, m).unwrap();
        // spot entries of the third-order 2:1 large-step rule
        assert_eq!(t.entry_at_ticks(&[0, 1]).unwrap(), rat(115, 64));
        assert_eq!(t.entry_at_ticks(&[0, 0]).unwrap(), rat(7, 24));
        assert_eq!(t.entry_at_ticks(&[0, -1]).unwrap(), rat(-11, 64));
        assert_eq!(t.entry_at_ticks(&[-2, 1]).unwrap(), rat(-115, 96));
        assert_eq!(t.entry_at_ticks(&[-2, -1]).unwrap(), rat(-11, 32));
        assert_eq!(t.entry_at_ticks(&[-2, -2]).unwrap(), rat(5, 24));
        assert_eq!(t.entry_at_ticks(&[-4, 1]).unwrap(), rat(23, 64));
        assert_eq!(t.entry_at_ticks(&[-4, -1]).unwrap(), rat(11, 192));
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn order2_full_step_reproduces_2to1_rule() {
        let g = steady_21();
        let a_ticks = g.set_ticks(0).unwrap();
        let m = a_ticks.iter().position(|&t| t == 0).unwrap();
        let t: BetaTable<Rational> = accumulate_full_step(&g, 2, 0, m).unwrap();
        assert_eq!(t.entry_at_ticks(&[0, 1]).unwrap(), rat(9, 8));
        assert_eq!(t.entry_at_ticks(&[0, 0]).unwrap(), rat(1, 2));
        assert_eq!(t.entry_at_ticks(&[0, -1]).unwrap(), rat(-1, 8));
        assert_eq!(t.entry_at_ticks(&[-2, 1]).unwrap(), rat(-3, 8));
        assert_eq!(t.entry_at_ticks(&[-2, -1]).unwrap(), rat(-1, 8));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn identical_grids_full_step_is_plain_ab() {
        let g = two_set_grid(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]);
        let t: BetaTable<Rational> = accumulate_full_step(&g, 3, 0, 3).unwrap();
        assert_eq!(t.entry(&[3, 3]), rat(23, 12));
        assert_eq!(t.entry(&[2, 2]), rat(-4, 3));
        assert_eq!(t.entry(&[1, 1]), rat(5, 12));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn marginalized_table_gives_ab_coefficients() {
        let g = steady_21();
        let a_ticks = g.set_ticks(0).unwrap();
        let m = a_ticks.iter().position(|&t| t == 0).unwrap();
        for k in 2..=4usize {
            let t: BetaTable<Rational> = accumulate_full_step(&g, k, 0, m).unwrap();
            let vol = marginalize_volume(&t, 0).unwrap();
            let past: Vec<i64> = (0..k).map(|j| -2 * j as i64).collect();
            let expect: AbCoeffs<Rational> = ab_coefficients_ticks(&past, 2).unwrap();
            assert_eq!(vol.alpha, expect.alpha);
        }
        // column sums of the first small-step table of B likewise
        let b_ticks = g.set_ticks(1).unwrap();
        let mb = b_ticks.iter().position(|&t| t == 0).unwrap();
        let t: BetaTable<Rational> = accumulate_full_step(&g, 3, 1, mb).unwrap();
        let vol = marginalize_volume(&t, 1).unwrap();
        assert_eq!(vol.alpha, vec![rat(23, 12), rat(-4, 3), rat(5, 12)]);
    }

    #[test]
    fn wrong_kind_rejected() {
        let g = steady_21();
        let t: BetaTable<Rational> = lts_small_step_beta(&g, 2, 5).unwrap();
        assert_eq!(
            marginalize_volume(&t, 0).unwrap_err(),
            CoeffError::WrongKind
        );
        let full: BetaTable<Rational> = accumulate_full_step(&g, 2, 0, 4).unwrap();
        assert_eq!(
            marginalize_volume(&full, 1).unwrap_err(),
            CoeffError::WrongKind
        );
    }

    #[test]
    fn insufficient_history_rejected() {
        let g = steady_21();
        assert_eq!(
            lts_small_step_beta::<Rational>(&g, 3, 1).unwrap_err(),
            CoeffError::InsufficientHistory
        );
        let last = g.union_ticks().len() - 1;
        assert_eq!(
            lts_small_step_beta::<Rational>(&g, 3, last).unwrap_err(),
            CoeffError::InsufficientHistory
        );
        assert_eq!(
            accumulate_full_step::<Rational>(&g, 3, 0, 6).unwrap_err(),
            CoeffError::UndefinedStep
        );
    }
}
