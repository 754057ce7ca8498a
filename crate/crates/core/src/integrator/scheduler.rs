//! Union-time scheduler for local time-stepping evolution.
//!
//! Every set commits to a target completion time; the scheduler repeatedly
//! advances to the earliest committed target (the next union time) and
//! completes the steps that end there.  A completed step applies the
//! standard Adams-Bashforth rule to the set's volume derivative plus, per
//! face, the accumulated mixed-time coupling sum.  Coupling values are
//! computed once per evaluation-time pair and shared by both sides of the
//! face, so the two sides stay exactly balanced.

use super::controller::{clamp_to_gap, next_step_ticks, pow2_floor};
use super::history::{FaceCache, FaceValue, Record, SetHistory};
use super::{CoupledSystem, StepError};
use crate::coefficients::cache::CoeffCache;
use crate::time_grid::{Resolution, TickTime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SteppingMode {
    /// Independent per-set step sizes from each set's stability bound.
    Local,
    /// All sets share one step size driven by the global minimum bound.
    Shared,
    /// Pinned per-set step sizes in ticks; stability bounds are ignored.
    Fixed(Vec<i64>),
}

#[derive(Clone, Debug)]
pub struct LtsOptions {
    pub order: usize,
    pub resolution: Resolution,
    pub mode: SteppingMode,
    /// Keep a log of completed steps (set, start tick, size in ticks).
    pub record_steps: bool,
}

impl LtsOptions {
    pub fn new(order: usize) -> Self {
        assert!((1..=8).contains(&order), "order must be in 1..=8");
        LtsOptions {
            order,
            resolution: Resolution::default(),
            mode: SteppingMode::Local,
            record_steps: false,
        }
    }
}

/// One completed step, for the step-pattern log.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepLogEntry {
    pub set: usize,
    pub start_tick: i64,
    pub size_ticks: i64,
}

#[derive(Clone, Debug, Default)]
pub struct EvalCounters {
    pub volume_evals: u64,
    pub coupling_evals: u64,
    pub steps_per_set: Vec<u64>,
    pub min_step_ticks: i64,
}

#[derive(Debug, PartialEq, Eq)]
pub enum AdvanceOutcome {
    /// Evolution moved to the next union time.
    Advanced { tick: i64 },
    /// Every set has reached the end time.
    Finished,
}

struct SetRuntime {
    history: SetHistory,
    /// Last completed evaluation tick.
    now: i64,
    /// Committed step size; the set completes next at `now + step`.
    step: i64,
    /// Size of the most recently completed step (0 before any step).
    last_completed: i64,
    /// Consecutive completed steps of size `last_completed`.
    equal_run: usize,
    done: bool,
    /// (face id, other set, this set is the face's left side)
    faces: Vec<(usize, usize, bool)>,
}

pub struct LtsIntegrator<'a, S: CoupledSystem> {
    system: &'a S,
    order: usize,
    resolution: Resolution,
    mode: SteppingMode,
    record_steps: bool,
    t_end_tick: i64,
    sets: Vec<SetRuntime>,
    face_caches: Vec<FaceCache>,
    coeffs: CoeffCache,
    counters: EvalCounters,
    step_log: Vec<StepLogEntry>,
}

impl<'a, S: CoupledSystem> LtsIntegrator<'a, S> {
    /// Start an evolution from initial states at `t0`, bootstrapping the
    /// multistep history with an order ramp at the (tiny) initial step.
    ///
    /// The first k-1 steps run at orders 1, 2, ..., k-1 on all sets
    /// synchronously; the controller cannot raise the step before the ramp
    /// completes because an increase requires k-1 equal previous steps.
    pub fn self_start(
        system: &'a S,
        initial: Vec<Vec<f64>>,
        t0: TickTime,
        t_end: TickTime,
        initial_step_ticks: i64,
        opts: LtsOptions,
    ) -> Self {
        assert_eq!(initial.len(), system.num_sets());
        assert!(
            initial_step_ticks >= 1 && initial_step_ticks.count_ones() == 1,
            "initial step must be a positive power of two in ticks"
        );
        let t0_tick = rescale_tick(t0, opts.resolution);
        let t_end_tick = rescale_tick(t_end, opts.resolution);
        assert!(t_end_tick >= t0_tick, "end time before start time");
        assert_eq!(
            t0_tick.rem_euclid(initial_step_ticks),
            0,
            "start time must align with the initial step"
        );
        let mut histories = Vec::with_capacity(initial.len());
        let mut counters = EvalCounters {
            steps_per_set: vec![0; initial.len()],
            min_step_ticks: i64::MAX,
            ..EvalCounters::default()
        };
        let t0_units = t0_tick as f64 * opts.resolution.tick_size();
        for (set, state) in initial.into_iter().enumerate() {
            let mut deriv = vec![0.0; state.len()];
            system.volume(set, t0_units, &state, &mut deriv);
            counters.volume_evals += 1;
            let mut h = SetHistory::new();
            h.push(Record {
                tick: t0_tick,
                state,
                volume_deriv: deriv,
            });
            histories.push(h);
        }
        Self::assemble(
            system,
            histories,
            initial_step_ticks,
            t_end_tick,
            counters,
            opts,
        )
    }

    /// Start from explicit per-set histories (already synchronized and
    /// holding enough records for the requested order) with committed step
    /// sizes.  Used by tests and by pinned-pattern runs.
    pub fn from_history(
        system: &'a S,
        histories: Vec<SetHistory>,
        step_ticks: i64,
        t_end: TickTime,
        opts: LtsOptions,
    ) -> Self {
        let t_end_tick = rescale_tick(t_end, opts.resolution);
        let counters = EvalCounters {
            steps_per_set: vec![0; histories.len()],
            min_step_ticks: i64::MAX,
            ..EvalCounters::default()
        };
        Self::assemble(system, histories, step_ticks, t_end_tick, counters, opts)
    }

    fn assemble(
        system: &'a S,
        histories: Vec<SetHistory>,
        default_step: i64,
        t_end_tick: i64,
        counters: EvalCounters,
        opts: LtsOptions,
    ) -> Self {
        let nsets = system.num_sets();
        assert_eq!(histories.len(), nsets);
        let mut faces_per_set: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); nsets];
        for f in 0..system.num_faces() {
            let (l, r) = system.face_sets(f);
            faces_per_set[l].push((f, r, true));
            faces_per_set[r].push((f, l, false));
        }
        let sets: Vec<SetRuntime> = histories
            .into_iter()
            .enumerate()
            .map(|(s, history)| {
                let now = history.latest().expect("empty history").tick;
                let step = match &opts.mode {
                    SteppingMode::Fixed(steps) => steps[s],
                    _ => default_step,
                };
                let done = now >= t_end_tick;
                let step = if done {
                    step
                } else {
                    clamp_to_gap(step, t_end_tick - now)
                };
                SetRuntime {
                    history,
                    now,
                    step,
                    last_completed: 0,
                    equal_run: 0,
                    done,
                    faces: std::mem::take(&mut faces_per_set[s]),
                }
            })
            .collect();
        LtsIntegrator {
            system,
            order: opts.order,
            resolution: opts.resolution,
            mode: opts.mode,
            record_steps: opts.record_steps,
            t_end_tick,
            sets,
            face_caches: vec![FaceCache::new(); system.num_faces()],
            coeffs: CoeffCache::new(),
            counters,
            step_log: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn finished(&self) -> bool {
        self.sets.iter().all(|s| s.done)
    }

    /// Latest committed state of one set.
    pub fn state(&self, set: usize) -> &[f64] {
        &self.sets[set].history.latest().unwrap().state
    }

    pub fn set_tick(&self, set: usize) -> i64 {
        self.sets[set].now
    }

    /// Current tick if every set sits at the same evaluation time.
    pub fn synchronized_tick(&self) -> Option<i64> {
        let t = self.sets[0].now;
        self.sets.iter().all(|s| s.now == t).then_some(t)
    }

    pub fn counters(&self) -> &EvalCounters {
        &self.counters
    }

    pub fn step_log(&self) -> &[StepLogEntry] {
        &self.step_log
    }

    pub fn drain_step_log(&mut self) -> Vec<StepLogEntry> {
        std::mem::take(&mut self.step_log)
    }

    /// Advance to the next union time, completing every step that ends
    /// there.
    pub fn advance(&mut self) -> Result<AdvanceOutcome, StepError> {
        let target = self
            .sets
            .iter()
            .filter(|s| !s.done)
            .map(|s| s.now + s.step)
            .min();
        let Some(target) = target else {
            return Ok(AdvanceOutcome::Finished);
        };
        let completing: Vec<usize> = (0..self.sets.len())
            .filter(|&s| !self.sets[s].done && self.sets[s].now + self.sets[s].step == target)
            .collect();
        for &s in &completing {
            self.complete_step(s, target)?;
        }
        self.choose_next_steps(&completing, target);
        self.prune();
        Ok(AdvanceOutcome::Advanced { tick: target })
    }

    /// Run until every set reaches the end time.
    pub fn run_to_end(&mut self) -> Result<(), StepError> {
        while !matches!(self.advance()?, AdvanceOutcome::Finished) {}
        Ok(())
    }

    fn complete_step(&mut self, s: usize, target: i64) -> Result<(), StepError> {
        let tick_size = self.resolution.tick_size();
        let set = &self.sets[s];
        let k_eff = self.order.min(set.history.len());
        let own_past = set.history.last_ticks(k_eff);
        debug_assert_eq!(own_past[0], set.now);
        let dt = (target - set.now) as f64 * tick_size;

        // volume part: plain Adams-Bashforth on the set's own record times
        let alpha = self.coeffs.volume_coeffs(&own_past, target)?;
        let len = set.history.latest().unwrap().state.len();
        let mut increment = vec![0.0; len];
        for (j, a) in alpha.iter().enumerate() {
            let deriv = &set.history.back(j).unwrap().volume_deriv;
            for i in 0..len {
                increment[i] += a * deriv[i];
            }
        }

        // coupling part: accumulated mixed-time sums per face
        let faces = self.sets[s].faces.clone();
        for (face, other, is_left) in faces {
            let nbr_window = self.sets[other]
                .history
                .window_ticks(k_eff, self.sets[s].now, target)
                .ok_or(StepError::InsufficientHistory {
                    set: other,
                    order: k_eff,
                })?;
            let table = self.coeffs.couple_table(&own_past, target, &nbr_window)?;
            let mut acc = vec![0.0; len];
            for &(own_back, nbr_back, a) in &table.entries {
                let own_tick = own_past[own_back];
                let nbr_tick = nbr_window[nbr_window.len() - 1 - nbr_back];
                let (lt, rt) = if is_left {
                    (own_tick, nbr_tick)
                } else {
                    (nbr_tick, own_tick)
                };
                if self.face_caches[face].get(lt, rt).is_none() {
                    let (lset, rset) = self.system.face_sets(face);
                    let left_state = self.sets[lset]
                        .history
                        .record_at(lt)
                        .ok_or(StepError::MissingCouplingRecord {
                            face,
                            left: lt,
                            right: rt,
                        })?
                        .state
                        .clone();
                    let right_rec = self.sets[rset].history.record_at(rt).ok_or(
                        StepError::MissingCouplingRecord {
                            face,
                            left: lt,
                            right: rt,
                        },
                    )?;
                    let mut out_left = vec![0.0; self.system.state_len(lset)];
                    let mut out_right = vec![0.0; self.system.state_len(rset)];
                    self.system.face_coupling(
                        face,
                        &left_state,
                        &right_rec.state,
                        &mut out_left,
                        &mut out_right,
                    );
                    self.counters.coupling_evals += 1;
                    self.face_caches[face].insert(
                        lt,
                        rt,
                        FaceValue {
                            left: out_left,
                            right: out_right,
                        },
                    );
                }
                let value = self.face_caches[face].get(lt, rt).unwrap();
                let side = if is_left { &value.left } else { &value.right };
                for i in 0..len {
                    acc[i] += a * side[i];
                }
            }
            for i in 0..len {
                increment[i] += acc[i];
            }
        }

        // apply the step and record the new evaluation
        let set = &mut self.sets[s];
        let mut state = set.history.latest().unwrap().state.clone();
        for i in 0..len {
            state[i] += dt * increment[i];
        }
        let t_units = target as f64 * tick_size;
        let mut deriv = vec![0.0; len];
        self.system.volume(s, t_units, &state, &mut deriv);
        self.counters.volume_evals += 1;
        let h_done = target - set.now;
        set.history.push(Record {
            tick: target,
            state,
            volume_deriv: deriv,
        });
        if h_done == set.last_completed {
            set.equal_run += 1;
        } else {
            set.last_completed = h_done;
            set.equal_run = 1;
        }
        set.now = target;
        self.counters.steps_per_set[s] += 1;
        self.counters.min_step_ticks = self.counters.min_step_ticks.min(h_done);
        if self.record_steps {
            self.step_log.push(StepLogEntry {
                set: s,
                start_tick: target - h_done,
                size_ticks: h_done,
            });
        }
        Ok(())
    }

    fn choose_next_steps(&mut self, completed: &[usize], target: i64) {
        match &self.mode {
            SteppingMode::Fixed(_) => {
                for &s in completed {
                    let set = &mut self.sets[s];
                    if set.now >= self.t_end_tick {
                        set.done = true;
                    }
                }
            }
            SteppingMode::Local => {
                for &s in completed {
                    // stability near a step-size change depends on the
                    // characteristic speeds in the neighborhood, not just
                    // the element itself: honor the neighbors' bounds too
                    let bound = self.sets[s]
                        .faces
                        .iter()
                        .map(|&(_, other, _)| self.bound_ticks(other))
                        .chain([self.bound_ticks(s)])
                        .min()
                        .unwrap();
                    let set = &mut self.sets[s];
                    if set.now >= self.t_end_tick {
                        set.done = true;
                        continue;
                    }
                    let next = next_step_ticks(
                        set.last_completed,
                        set.now,
                        set.equal_run,
                        self.order,
                        bound,
                    );
                    set.step = clamp_to_gap(next, self.t_end_tick - set.now);
                }
            }
            SteppingMode::Shared => {
                // all sets complete together; pick one step from the
                // global minimum bound and give it to everyone
                debug_assert_eq!(completed.len(), self.sets.len());
                if target >= self.t_end_tick {
                    for set in &mut self.sets {
                        set.done = true;
                    }
                    return;
                }
                let bound = (0..self.sets.len())
                    .map(|s| self.bound_ticks(s))
                    .min()
                    .unwrap();
                let lead = &self.sets[0];
                let next = next_step_ticks(
                    lead.last_completed,
                    lead.now,
                    lead.equal_run,
                    self.order,
                    bound,
                );
                let next = clamp_to_gap(next, self.t_end_tick - target);
                for set in &mut self.sets {
                    set.step = next;
                }
            }
        }
    }

    fn bound_ticks(&self, s: usize) -> i64 {
        let set = &self.sets[s];
        let bound = self
            .system
            .max_stable_step(s, &set.history.latest().unwrap().state);
        let ticks = bound / self.resolution.tick_size();
        if ticks.is_nan() || ticks < 1.0 {
            1
        } else if ticks >= 9.0e15 {
            pow2_floor(1i64 << 62)
        } else {
            ticks as i64
        }
    }

    fn prune(&mut self) {
        let keep = self.order.max(2);
        let cutoffs: Vec<i64> = (0..self.sets.len())
            .map(|s| {
                self.sets[s]
                    .faces
                    .iter()
                    .map(|&(_, other, _)| self.sets[other].now)
                    .chain([self.sets[s].now])
                    .min()
                    .unwrap()
            })
            .collect();
        for (set, &cutoff) in self.sets.iter_mut().zip(&cutoffs) {
            set.history.prune(cutoff, keep);
        }
        for f in 0..self.face_caches.len() {
            let (l, r) = self.system.face_sets(f);
            let lo = self.sets[l].history.oldest_tick().unwrap_or(i64::MIN);
            let ro = self.sets[r].history.oldest_tick().unwrap_or(i64::MIN);
            self.face_caches[f].prune(lo, ro);
        }
    }
}

fn rescale_tick(t: TickTime, resolution: Resolution) -> i64 {
    let shift = t.resolution().exponent() - resolution.exponent();
    assert!(shift >= 0, "time finer than the evolution resolution");
    t.ticks() << shift as u32
}
