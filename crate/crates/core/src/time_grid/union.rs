use super::{Resolution, TickTime, TimeGridError};

/// A strictly increasing sequence of evaluation times for one set of
/// degrees of freedom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSequence {
    pub set_id: usize,
    pub times: Vec<TickTime>,
}

impl StepSequence {
    pub fn new(set_id: usize, times: Vec<TickTime>) -> Self {
        StepSequence { set_id, times }
    }

    /// Build a sequence from raw tick counts at one resolution.
    pub fn from_ticks(set_id: usize, ticks: &[i64], resolution: Resolution) -> Self {
        StepSequence {
            set_id,
            times: ticks
                .iter()
                .map(|&t| TickTime::new(t, resolution))
                .collect(),
        }
    }

    fn validate(&self) -> Result<(), TimeGridError> {
        if self.times.is_empty() || self.times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TimeGridError::NonMonotonic { set: self.set_id });
        }
        Ok(())
    }
}

/// Which sets evaluate at a union time, for the two-set special case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetSelection {
    FirstOnly,
    SecondOnly,
    Both,
}

/// The merged evaluation times of several sets, with the index maps between
/// per-set indices and union indices.
///
/// For every set `s` and union index `n`, `m_map[s][n]` is the index of the
/// last evaluation of `s` at or before union time `n`, and `n_map[s][m]` is
/// the union index of the set's `m`-th evaluation time.  Every union time is
/// an evaluation time of at least one set.
#[derive(Clone, Debug)]
pub struct UnionGrid {
    resolution: Resolution,
    /// Tick counts of the merged, deduplicated times, strictly increasing.
    union_ticks: Vec<i64>,
    /// Per set, the member tick sequence (rescaled to `resolution`).
    set_ticks: Vec<Vec<i64>>,
    m_map: Vec<Vec<usize>>,
    n_map: Vec<Vec<usize>>,
    /// Per union index, the sorted ids of sets evaluating there.
    selection: Vec<Vec<usize>>,
}

impl UnionGrid {
    /// Merge the given sequences into a union grid.
    ///
    /// All sequences must be nonempty, strictly increasing, and share a
    /// common first time (a synchronized start).  Set ids are taken from the
    /// positions in `sequences`, which must match their `set_id` fields.
    pub fn merge(sequences: &[StepSequence]) -> Result<Self, TimeGridError> {
        let first = &sequences[0].times[0];
        if sequences
            .iter()
            .any(|s| s.times.is_empty() || s.times[0] != *first)
        {
            return Err(TimeGridError::UnsynchronizedStart);
        }
        Self::merge_window(sequences)
    }

    /// Merge without the synchronized-start requirement.
    ///
    /// Used for the local windows the runtime coefficient cache builds
    /// around a single step.  For union times earlier than a set's first
    /// window time the m-map is clamped to index zero, so callers must only
    /// query union indices at or after every set's window start.
    pub(crate) fn merge_window(sequences: &[StepSequence]) -> Result<Self, TimeGridError> {
        assert!(!sequences.is_empty(), "no sequences to merge");
        for (i, seq) in sequences.iter().enumerate() {
            assert_eq!(seq.set_id, i, "set ids must be consecutive from zero");
            seq.validate()?;
        }

        // Rescale everything to the finest member resolution.
        let fine = sequences
            .iter()
            .flat_map(|s| s.times.iter().map(|t| t.resolution().exponent()))
            .min()
            .unwrap();
        let resolution = Resolution::new(fine);
        let set_ticks: Vec<Vec<i64>> = sequences
            .iter()
            .map(|s| {
                s.times
                    .iter()
                    .map(|t| t.ticks() << (t.resolution().exponent() - fine) as u32)
                    .collect()
            })
            .collect();

        let mut union_ticks: Vec<i64> = set_ticks.iter().flatten().copied().collect();
        union_ticks.sort_unstable();
        union_ticks.dedup();

        let mut m_map = Vec::with_capacity(set_ticks.len());
        let mut n_map = Vec::with_capacity(set_ticks.len());
        let mut selection = vec![Vec::new(); union_ticks.len()];
        for (s, ticks) in set_ticks.iter().enumerate() {
            let mut m = vec![0usize; union_ticks.len()];
            let mut n = Vec::with_capacity(ticks.len());
            let mut cursor = 0usize; // index of last set time <= current union time
            for (ui, &ut) in union_ticks.iter().enumerate() {
                while cursor + 1 < ticks.len() && ticks[cursor + 1] <= ut {
                    cursor += 1;
                }
                m[ui] = cursor;
                if ticks[cursor] == ut {
                    n.push(ui);
                    selection[ui].push(s);
                }
            }
            debug_assert_eq!(n.len(), ticks.len());
            m_map.push(m);
            n_map.push(n);
        }

        Ok(UnionGrid {
            resolution,
            union_ticks,
            set_ticks,
            m_map,
            n_map,
            selection,
        })
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn num_sets(&self) -> usize {
        self.set_ticks.len()
    }

    /// The merged times as tick counts at `resolution()`.
    pub fn union_ticks(&self) -> &[i64] {
        &self.union_ticks
    }

    pub fn union_times(&self) -> Vec<TickTime> {
        self.union_ticks
            .iter()
            .map(|&t| TickTime::new(t, self.resolution))
            .collect()
    }

    /// Evaluation times of one set, as tick counts at `resolution()`.
    pub fn set_ticks(&self, set: usize) -> Result<&[i64], TimeGridError> {
        self.set_ticks
            .get(set)
            .map(|v| v.as_slice())
            .ok_or(TimeGridError::UnknownSet(set))
    }

    /// The index maps for one set: per union index the last-evaluation map
    /// m(n), and per set index the union index map n(m).
    pub fn index_maps(&self, set: usize) -> Result<(&[usize], &[usize]), TimeGridError> {
        if set >= self.set_ticks.len() {
            return Err(TimeGridError::UnknownSet(set));
        }
        Ok((&self.m_map[set], &self.n_map[set]))
    }

    /// m(n): index of the last evaluation of `set` at or before union time n.
    pub fn m_of(&self, set: usize, n: usize) -> usize {
        self.m_map[set][n]
    }

    /// n(m): union index of the set's m-th evaluation time.
    pub fn n_of(&self, set: usize, m: usize) -> usize {
        self.n_map[set][m]
    }

    /// Sets that evaluate at union time `n`.
    pub fn selection(&self, n: usize) -> &[usize] {
        &self.selection[n]
    }

    /// Two-set selection flags (valid only for grids of exactly two sets).
    pub fn two_set_selection(&self, n: usize) -> Result<SetSelection, TimeGridError> {
        if self.num_sets() != 2 {
            return Err(TimeGridError::UnknownSet(2));
        }
        Ok(match self.selection[n].as_slice() {
            [0] => SetSelection::FirstOnly,
            [1] => SetSelection::SecondOnly,
            [0, 1] => SetSelection::Both,
            other => unreachable!("invalid selection {other:?}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: &[i64], b: &[i64]) -> UnionGrid {
        let r = Resolution::new(-40);
        UnionGrid::merge(&[
            StepSequence::from_ticks(0, a, r),
            StepSequence::from_ticks(1, b, r),
        ])
        .unwrap()
    }

    #[test]
    fn two_set_fan_pattern() {
        // A at union indices {0,2,3,4}, B at {0,1,4}.
        let g = grid(&[0, 2, 3, 4], &[0, 1, 4]);
        assert_eq!(g.union_ticks(), &[0, 1, 2, 3, 4]);
        assert_eq!(g.index_maps(0).unwrap().0, &[0, 0, 1, 2, 3]);
        assert_eq!(g.index_maps(1).unwrap().0, &[0, 1, 1, 1, 2]);
        assert_eq!(g.n_of(0, 3), 4);
        assert_eq!(g.n_of(1, 1), 1);
        assert_eq!(g.n_of(1, 2), 4);
        assert_eq!(g.two_set_selection(1).unwrap(), SetSelection::SecondOnly);
        assert_eq!(g.two_set_selection(2).unwrap(), SetSelection::FirstOnly);
        assert_eq!(g.two_set_selection(4).unwrap(), SetSelection::Both);
    }

    #[test]
    fn identical_grids_are_degenerate() {
        let g = grid(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        assert_eq!(g.union_ticks(), &[0, 1, 2, 3]);
        for n in 0..4 {
            assert_eq!(g.m_of(0, n), n);
            assert_eq!(g.m_of(1, n), n);
            assert_eq!(g.two_set_selection(n).unwrap(), SetSelection::Both);
        }
    }

    #[test]
    fn hand_merged_maps() {
        let g = grid(&[0, 2, 4], &[0, 1, 2, 3, 4]);
        assert_eq!(g.union_ticks(), &[0, 1, 2, 3, 4]);
        assert_eq!(g.index_maps(0).unwrap().0, &[0, 0, 1, 1, 2]);
        assert_eq!(g.index_maps(0).unwrap().1, &[0, 2, 4]);
    }

    #[test]
    fn single_sequence_round_trip() {
        let r = Resolution::new(-40);
        let seq = StepSequence::from_ticks(0, &[3, 5, 9], r);
        let g = UnionGrid::merge(std::slice::from_ref(&seq)).unwrap();
        assert_eq!(g.union_ticks(), &[3, 5, 9]);
        assert_eq!(g.index_maps(0).unwrap().0, &[0, 1, 2]);
        assert_eq!(g.index_maps(0).unwrap().1, &[0, 1, 2]);
    }

    #[test]
    fn unsynchronized_start_rejected() {
        let r = Resolution::new(-40);
        let res = UnionGrid::merge(&[
            StepSequence::from_ticks(0, &[0, 1], r),
            StepSequence::from_ticks(1, &[1, 2], r),
        ]);
        assert_eq!(res.unwrap_err(), TimeGridError::UnsynchronizedStart);
    }

    #[test]
    fn non_monotonic_rejected() {
        let r = Resolution::new(-40);
        let res = UnionGrid::merge(&[StepSequence::from_ticks(0, &[0, 2, 2], r)]);
        assert_eq!(res.unwrap_err(), TimeGridError::NonMonotonic { set: 0 });
    }

    #[test]
    fn mixed_resolution_inputs_merge_exactly() {
        let a = StepSequence::new(
            0,
            vec![
                TickTime::new(0, Resolution::new(-3)),
                TickTime::new(1, Resolution::new(-3)), // 1/8
            ],
        );
        let b = StepSequence::new(
            1,
            vec![
                TickTime::new(0, Resolution::new(-5)),
                TickTime::new(2, Resolution::new(-5)), // 1/16
                TickTime::new(4, Resolution::new(-5)), // 1/8
            ],
        );
        let g = UnionGrid::merge(&[a, b]).unwrap();
        assert_eq!(g.resolution().exponent(), -5);
        assert_eq!(g.union_ticks(), &[0, 2, 4]);
    }
}

#[cfg(test)]
mod property_tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn m_map_bounds_and_permutation_invariance_on_random_grids() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let r = Resolution::new(-30);
        for _ in 0..200 {
            let nsets = rng.gen_range(2..5);
            let start = rng.gen_range(-500i64..500);
            let seqs: Vec<StepSequence> = (0..nsets)
                .map(|s| {
                    let mut t = start;
                    let mut ticks = vec![t];
                    for _ in 0..rng.gen_range(1..12) {
                        t += rng.gen_range(1..40);
                        ticks.push(t);
                    }
                    StepSequence::from_ticks(s, &ticks, r)
                })
                .collect();
            let g = UnionGrid::merge(&seqs).unwrap();
            let u = g.union_ticks();
            for s in 0..nsets {
                let ticks = g.set_ticks(s).unwrap();
                let (m_map, n_map) = g.index_maps(s).unwrap();
                for (n, &ut) in u.iter().enumerate() {
                    let m = m_map[n];
                    // the mapped evaluation is the last one not after the
                    // union time
                    assert!(ticks[m] <= ut);
                    if m + 1 < ticks.len() {
                        assert!(ut < ticks[m + 1]);
                    }
                    // n(m(n)) <= n with equality iff this union time is an
                    // evaluation time of the set
                    assert!(n_map[m] <= n);
                    assert_eq!(n_map[m] == n, ticks[m] == ut);
                }
                for (m, &n) in n_map.iter().enumerate() {
                    assert_eq!(u[n], ticks[m]);
                }
            }
            // permuting the input sets permutes per-set maps but leaves
            // the union unchanged (checked via a two-set swap)
            if nsets == 2 {
                let swapped = UnionGrid::merge(&[
                    StepSequence { set_id: 0, ..seqs[1].clone() },
                    StepSequence { set_id: 1, ..seqs[0].clone() },
                ])
                .unwrap();
                assert_eq!(swapped.union_ticks(), g.union_ticks());
                assert_eq!(swapped.index_maps(0).unwrap().0, g.index_maps(1).unwrap().0);
                assert_eq!(swapped.index_maps(1).unwrap().1, g.index_maps(0).unwrap().1);
            }
        }
    }
}
