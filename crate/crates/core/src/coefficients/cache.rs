//! Memoized runtime coefficient tables.
//!
//! Steady stepping reuses a handful of relative step patterns, so tables
//! are cached keyed by the translation- and scale-normalized pattern:
//! shifting all times leaves the coefficients unchanged, and rescaling
//! changes nothing in the dimensionless accumulated form.  Entries are
//! generated exactly in rational arithmetic and converted to `f64` once, on
//! insertion.  A cache is owned by one evolution worker; it is not shared
//! between threads.

use super::{ab_coefficients_ticks, accumulate_full_step, BetaTable, CoeffError, Rational};
use crate::coefficients::CoeffScalar;
use crate::time_grid::{Resolution, StepSequence, UnionGrid};
use num::integer::gcd;
use std::collections::HashMap;
use std::sync::Arc;

/// One accumulated coupling table in runtime form.
///
/// `own_back` counts records back from the stepping set's step start;
/// `nbr_back` counts back from the neighbor's most recent evaluation
/// strictly before the step end.  The step increment contribution is
/// `dt * sum a * B(own value, neighbor value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupleTable {
    pub order: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

#[derive(Hash, PartialEq, Eq, Clone)]
struct PairKey {
    order: usize,
    own: Vec<i64>,
    nbr: Vec<i64>,
}

#[derive(Hash, PartialEq, Eq, Clone)]
struct VolumeKey {
    own: Vec<i64>,
}

/// Per-worker memo of volume coefficients and coupling tables.
#[derive(Default)]
pub struct CoeffCache {
    volume: HashMap<VolumeKey, Arc<Vec<f64>>>,
    pair: HashMap<PairKey, Arc<CoupleTable>>,
}

impl CoeffCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adams-Bashforth coefficients for a step from `own_past[0]` (ticks,
    /// most recent first) to `target`.
    pub fn volume_coeffs(
        &mut self,
        own_past: &[i64],
        target: i64,
    ) -> Result<Arc<Vec<f64>>, CoeffError> {
        let start = own_past[0];
        let g = own_past
            .iter()
            .chain([&target])
            .fold(0i64, |acc, &t| gcd(acc, (t - start).abs()))
            .max(1);
        let key = VolumeKey {
            own: own_past
                .iter()
                .chain([&target])
                .map(|&t| (t - start) / g)
                .collect(),
        };
        if let Some(hit) = self.volume.get(&key) {
            return Ok(hit.clone());
        }
        let k = own_past.len();
        let coeffs = ab_coefficients_ticks::<Rational>(&key.own[..k], key.own[k])?;
        let alpha: Vec<f64> = coeffs.alpha.iter().map(|a| a.to_f64()).collect();
        let alpha = Arc::new(alpha);
        self.volume.insert(key, alpha.clone());
        Ok(alpha)
    }

    /// Accumulated coupling table for a full step of one set against one
    /// neighbor.
    ///
    /// `own_past` holds the set's k most recent evaluation ticks (most
    /// recent first, so `own_past[0]` is the step start), `target` the step
    /// end.  `nbr_window` holds the neighbor's evaluation ticks ascending,
    /// from its k-th most recent evaluation at or before the step start
    /// through its last evaluation strictly before the step end.
    pub fn couple_table(
        &mut self,
        own_past: &[i64],
        target: i64,
        nbr_window: &[i64],
    ) -> Result<Arc<CoupleTable>, CoeffError> {
        let start = own_past[0];
        let g = own_past
            .iter()
            .chain([&target])
            .chain(nbr_window)
            .fold(0i64, |acc, &t| gcd(acc, (t - start).abs()))
            .max(1);
        let norm = |t: i64| (t - start) / g;
        let key = PairKey {
            order: own_past.len(),
            own: own_past
                .iter()
                .rev()
                .map(|&t| norm(t))
                .chain([norm(target)])
                .collect(),
            nbr: nbr_window.iter().map(|&t| norm(t)).collect(),
        };
        if let Some(hit) = self.pair.get(&key) {
            return Ok(hit.clone());
        }
        let table = build_couple_table(&key)?;
        let table = Arc::new(table);
        self.pair.insert(key, table.clone());
        Ok(table)
    }

    /// (volume entries, coupling entries) currently cached.
    pub fn len(&self) -> (usize, usize) {
        (self.volume.len(), self.pair.len())
    }

    pub fn is_empty(&self) -> bool {
        self.volume.is_empty() && self.pair.is_empty()
    }
}

fn build_couple_table(key: &PairKey) -> Result<CoupleTable, CoeffError> {
    let k = key.order;
    let r = Resolution::new(0);
    let grid = UnionGrid::merge_window(&[
        StepSequence::from_ticks(0, &key.own, r),
        StepSequence::from_ticks(1, &key.nbr, r),
    ])?;
    let table: BetaTable<Rational> = accumulate_full_step(&grid, k, 0, k - 1)?;
    let nbr_last = key.nbr.len() - 1;
    let entries = table
        .entries()
        .map(|(q, v)| ((k - 1) - q[0], nbr_last - q[1], v.to_f64()))
        .collect();
    Ok(CoupleTable { order: k, entries })
}
