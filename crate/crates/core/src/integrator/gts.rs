//! Global time-stepping reference integrator.
//!
//! Plain variable-step Adams-Bashforth on the whole system at once: every
//! set advances with the same step, chosen from the most restrictive
//! stability bound.  Serves as the baseline the local scheme is measured
//! against, and as the cross-check for the degenerate identical-grid case.

use super::controller::{clamp_to_gap, next_step_ticks, pow2_floor};
use super::scheduler::{AdvanceOutcome, EvalCounters, StepLogEntry};
use super::{CoupledSystem, StepError};
use crate::coefficients::cache::CoeffCache;
use crate::time_grid::{Resolution, TickTime};
use std::collections::VecDeque;

struct GtsRecord {
    tick: i64,
    states: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

pub struct GtsIntegrator<'a, S: CoupledSystem> {
    system: &'a S,
    order: usize,
    resolution: Resolution,
    record_steps: bool,
    t_end_tick: i64,
    now: i64,
    step: i64,
    last_completed: i64,
    equal_run: usize,
    done: bool,
    history: VecDeque<GtsRecord>,
    coeffs: CoeffCache,
    counters: EvalCounters,
    step_log: Vec<StepLogEntry>,
}

impl<'a, S: CoupledSystem> GtsIntegrator<'a, S> {
    #[allow(clippy::too_many_arguments)]
    pub fn self_start(
        system: &'a S,
        initial: Vec<Vec<f64>>,
        t0: TickTime,
        t_end: TickTime,
        initial_step_ticks: i64,
        order: usize,
        resolution: Resolution,
        record_steps: bool,
    ) -> Self {
        assert!((1..=8).contains(&order), "order must be in 1..=8");
        assert!(
            initial_step_ticks >= 1 && initial_step_ticks.count_ones() == 1,
            "initial step must be a positive power of two in ticks"
        );
        let shift_t0 = t0.resolution().exponent() - resolution.exponent();
        let t0_tick = t0.ticks() << shift_t0.max(0) as u32;
        let shift_te = t_end.resolution().exponent() - resolution.exponent();
        let t_end_tick = t_end.ticks() << shift_te.max(0) as u32;
        assert!(shift_t0 >= 0 && shift_te >= 0, "time finer than resolution");
        assert_eq!(t0_tick.rem_euclid(initial_step_ticks), 0);
        let nsets = system.num_sets();
        let mut counters = EvalCounters {
            steps_per_set: vec![0; nsets],
            min_step_ticks: i64::MAX,
            ..EvalCounters::default()
        };
        let mut me = GtsIntegrator {
            system,
            order,
            resolution,
            record_steps,
            t_end_tick,
            now: t0_tick,
            step: if t0_tick < t_end_tick {
                clamp_to_gap(initial_step_ticks, t_end_tick - t0_tick)
            } else {
                initial_step_ticks
            },
            last_completed: 0,
            equal_run: 0,
            done: t0_tick >= t_end_tick,
            history: VecDeque::new(),
            coeffs: CoeffCache::new(),
            counters: EvalCounters::default(),
            step_log: Vec::new(),
        };
        let derivs = me.full_derivative(t0_tick, &initial, &mut counters);
        me.counters = counters;
        me.history.push_back(GtsRecord {
            tick: t0_tick,
            states: initial,
            derivs,
        });
        me
    }

    fn full_derivative(
        &self,
        tick: i64,
        states: &[Vec<f64>],
        counters: &mut EvalCounters,
    ) -> Vec<Vec<f64>> {
        let t = tick as f64 * self.resolution.tick_size();
        let mut derivs: Vec<Vec<f64>> = states
            .iter()
            .enumerate()
            .map(|(s, y)| {
                let mut out = vec![0.0; y.len()];
                self.system.volume(s, t, y, &mut out);
                counters.volume_evals += 1;
                out
            })
            .collect();
        for f in 0..self.system.num_faces() {
            let (l, r) = self.system.face_sets(f);
            let mut out_l = vec![0.0; states[l].len()];
            let mut out_r = vec![0.0; states[r].len()];
            self.system
                .face_coupling(f, &states[l], &states[r], &mut out_l, &mut out_r);
            counters.coupling_evals += 1;
            for (d, v) in derivs[l].iter_mut().zip(&out_l) {
                *d += v;
            }
            for (d, v) in derivs[r].iter_mut().zip(&out_r) {
                *d += v;
            }
        }
        derivs
    }

    pub fn finished(&self) -> bool {
        self.done
    }

    pub fn now_tick(&self) -> i64 {
        self.now
    }

    pub fn state(&self, set: usize) -> &[f64] {
        &self.history.back().unwrap().states[set]
    }

    pub fn counters(&self) -> &EvalCounters {
        &self.counters
    }

    pub fn step_log(&self) -> &[StepLogEntry] {
        &self.step_log
    }

    pub fn advance(&mut self) -> Result<AdvanceOutcome, StepError> {
        if self.done {
            return Ok(AdvanceOutcome::Finished);
        }
        let target = self.now + self.step;
        let k_eff = self.order.min(self.history.len());
        let past: Vec<i64> = self
            .history
            .iter()
            .rev()
            .take(k_eff)
            .map(|r| r.tick)
            .collect();
        let alpha = self.coeffs.volume_coeffs(&past, target)?;
        let dt = (target - self.now) as f64 * self.resolution.tick_size();

        let latest = self.history.back().unwrap();
        let mut states: Vec<Vec<f64>> = latest.states.clone();
        let n = self.history.len();
        for (j, a) in alpha.iter().enumerate() {
            let rec = &self.history[n - 1 - j];
            for (s, y) in states.iter_mut().enumerate() {
                for (yi, di) in y.iter_mut().zip(&rec.derivs[s]) {
                    *yi += dt * a * di;
                }
            }
        }

        let mut counters = std::mem::take(&mut self.counters);
        let derivs = self.full_derivative(target, &states, &mut counters);
        self.counters = counters;
        let h_done = self.step;
        for c in self.counters.steps_per_set.iter_mut() {
            *c += 1;
        }
        self.counters.min_step_ticks = self.counters.min_step_ticks.min(h_done);
        if self.record_steps {
            for s in 0..self.system.num_sets() {
                self.step_log.push(StepLogEntry {
                    set: s,
                    start_tick: self.now,
                    size_ticks: h_done,
                });
            }
        }
        self.history.push_back(GtsRecord {
            tick: target,
            states,
            derivs,
        });
        while self.history.len() > self.order {
            self.history.pop_front();
        }
        if h_done == self.last_completed {
            self.equal_run += 1;
        } else {
            self.last_completed = h_done;
            self.equal_run = 1;
        }
        self.now = target;
        if self.now >= self.t_end_tick {
            self.done = true;
            return Ok(AdvanceOutcome::Advanced { tick: target });
        }
        let bound = self.global_bound_ticks();
        let next = next_step_ticks(
            self.last_completed,
            self.now,
            self.equal_run,
            self.order,
            bound,
        );
        self.step = clamp_to_gap(next, self.t_end_tick - self.now);
        Ok(AdvanceOutcome::Advanced { tick: target })
    }

    pub fn run_to_end(&mut self) -> Result<(), StepError> {
        while !matches!(self.advance()?, AdvanceOutcome::Finished) {
            if self.done {
                break;
            }
        }
        Ok(())
    }

    fn global_bound_ticks(&self) -> i64 {
        let states = &self.history.back().unwrap().states;
        let bound = (0..self.system.num_sets())
            .map(|s| self.system.max_stable_step(s, &states[s]))
            .fold(f64::INFINITY, f64::min);
        let ticks = bound / self.resolution.tick_size();
        if ticks.is_nan() || ticks < 1.0 {
            1
        } else if ticks >= 9.0e15 {
            pow2_floor(1i64 << 62)
        } else {
            ticks as i64
        }
    }
}
