//! Per-set evaluation history and per-face coupling-value storage.

use std::collections::{HashMap, VecDeque};

/// One evaluation record of a set: the state and its volume derivative at
/// an evaluation time.
#[derive(Clone, Debug)]
pub struct Record {
    pub tick: i64,
    pub state: Vec<f64>,
    pub volume_deriv: Vec<f64>,
}

/// Ring buffer of a set's most recent evaluation records, ascending in
/// time.  Retention keeps the k most recent records at or before the oldest
/// step start any coupled neighbor may still reference.
#[derive(Clone, Debug, Default)]
pub struct SetHistory {
    records: VecDeque<Record>,
}

impl SetHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: Record) {
        if let Some(last) = self.records.back() {
            assert!(record.tick > last.tick, "history times must increase");
        }
        self.records.push_back(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn latest(&self) -> Option<&Record> {
        self.records.back()
    }

    /// The most recent `k` evaluation ticks, most recent first.
    pub fn last_ticks(&self, k: usize) -> Vec<i64> {
        self.records.iter().rev().take(k).map(|r| r.tick).collect()
    }

    /// Record `j` steps back from the most recent one.
    pub fn back(&self, j: usize) -> Option<&Record> {
        let n = self.records.len();
        if j < n {
            Some(&self.records[n - 1 - j])
        } else {
            None
        }
    }

    pub fn record_at(&self, tick: i64) -> Option<&Record> {
        // windows are tiny; a reverse scan beats a search structure
        self.records.iter().rev().find(|r| r.tick == tick)
    }

    /// Number of records with tick at or before `tick`.
    pub fn count_at_or_before(&self, tick: i64) -> usize {
        self.records.iter().filter(|r| r.tick <= tick).count()
    }

    /// Ticks of the neighbor window for a step `[start, end)` at order `k`:
    /// the k most recent evaluations at or before `start`, followed by every
    /// evaluation strictly inside the step, ascending.
    pub fn window_ticks(&self, k: usize, start: i64, end: i64) -> Option<Vec<i64>> {
        let upto: Vec<i64> = self
            .records
            .iter()
            .map(|r| r.tick)
            .filter(|&t| t <= start)
            .collect();
        if upto.len() < k {
            return None;
        }
        let mut window: Vec<i64> = upto[upto.len() - k..].to_vec();
        window.extend(
            self.records
                .iter()
                .map(|r| r.tick)
                .filter(|&t| t > start && t < end),
        );
        Some(window)
    }

    /// Drop records no longer reachable: keep everything newer than
    /// `cutoff` plus the `k` most recent records at or before it.
    pub fn prune(&mut self, cutoff: i64, k: usize) {
        while self.records.len() > k {
            let second_oldest = self.records[1].tick;
            if second_oldest <= cutoff && self.count_at_or_before(cutoff) > k {
                self.records.pop_front();
            } else {
                break;
            }
        }
    }

    pub fn oldest_tick(&self) -> Option<i64> {
        self.records.front().map(|r| r.tick)
    }
}

/// Coupling value of one face evaluated at a pair of set states, restricted
/// to each side.
#[derive(Clone, Debug)]
pub struct FaceValue {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Mailbox of coupling values for one face, keyed by the evaluation-time
/// pair (left tick, right tick).  Each value is computed once and read by
/// both sides, which keeps the two sides' increments exactly balanced.
#[derive(Clone, Debug, Default)]
pub struct FaceCache {
    values: HashMap<(i64, i64), FaceValue>,
}

impl FaceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, left_tick: i64, right_tick: i64) -> Option<&FaceValue> {
        self.values.get(&(left_tick, right_tick))
    }

    pub fn insert(&mut self, left_tick: i64, right_tick: i64, value: FaceValue) -> &FaceValue {
        self.values.entry((left_tick, right_tick)).or_insert(value)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Drop values older than the oldest retained history on either side.
    pub fn prune(&mut self, left_oldest: i64, right_oldest: i64) {
        self.values
            .retain(|&(lt, rt), _| lt >= left_oldest && rt >= right_oldest);
    }
}
