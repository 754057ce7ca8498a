//! Experiment drivers behind the command-line interface: single
//! evolutions, convergence sweeps, conservation traces, and step-count
//! comparisons between the global and local schemes.

mod config;
pub mod io;

pub use config::{
    apply_options, parse_config_text, parse_fraction, parse_threshold, Problem, RunConfig, RunMode,
};

use crate::dg_burgers::{BurgersDg, BurgersProblem, DgMesh};
use crate::integrator::{
    AdvanceOutcome, GtsIntegrator, LtsIntegrator, LtsOptions, StepLogEntry, SteppingMode,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("evolution failed: {0}")]
    Step(#[from] crate::integrator::StepError),
    #[error("reference solution error: {0}")]
    Dg(#[from] crate::dg_burgers::DgError),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Results of one evolution.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub mode: RunMode,
    pub order: usize,
    pub cfl_threshold: f64,
    /// Largest nodal deviation from the exact solution at the end time
    /// (only when the problem has a usable exact solution there).
    pub final_linf_error: Option<f64>,
    /// Conserved integral sampled at times when every element is
    /// synchronized.
    pub conservation_trace: Vec<(f64, f64)>,
    pub max_rel_drift: Option<f64>,
    pub steps_per_set: Vec<u64>,
    pub total_steps: u64,
    pub volume_evals: u64,
    pub coupling_evals: u64,
    pub min_step_ticks: i64,
    pub wall_seconds: f64,
}

/// Final nodal values plus the step log of one evolution.
pub struct RunOutput {
    pub report: RunReport,
    pub final_states: Vec<Vec<f64>>,
    pub step_log: Vec<StepLogEntry>,
    pub mesh: DgMesh,
}

fn build_system(config: &RunConfig) -> BurgersDg {
    let periodic = config.problem == Problem::Wave;
    let mesh = DgMesh::uniform(
        config.domain_lo,
        config.domain_hi,
        config.elements,
        config.nodes_per_element,
        periodic,
    );
    let problem = match config.problem {
        Problem::Wave => BurgersProblem::PeriodicWave,
        Problem::Bump => BurgersProblem::Bump,
    };
    BurgersDg::new(mesh, problem, config.cfl_threshold)
}

/// Run one evolution under the configured stepping mode.
pub fn run_evolution(config: &RunConfig) -> Result<RunOutput, RunError> {
    let system = build_system(config);
    let t0 = config.t0()?;
    let t_end = config.t_end()?;
    let initial = system.exact_state(t0.to_f64()).map_err(RunError::Dg)?;
    let start = std::time::Instant::now();

    let mut trace: Vec<(f64, f64)> = Vec::new();
    let c0 = system.mesh.conserved_integral(&initial);
    trace.push((t0.to_f64(), c0));

    let (final_states, step_log, counters) = match config.mode {
        RunMode::Gts => {
            let mut gts = GtsIntegrator::self_start(
                &system,
                initial,
                t0,
                t_end,
                config.initial_step_ticks(),
                config.order,
                config.resolution(),
                config.record_steps,
            );
            loop {
                match gts.advance()? {
                    AdvanceOutcome::Finished => break,
                    AdvanceOutcome::Advanced { tick } => {
                        let states: Vec<Vec<f64>> = (0..system.mesh.num_elements())
                            .map(|e| gts.state(e).to_vec())
                            .collect();
                        trace.push((
                            tick as f64 * config.resolution().tick_size(),
                            system.mesh.conserved_integral(&states),
                        ));
                    }
                }
                if gts.finished() {
                    break;
                }
            }
            let states: Vec<Vec<f64>> = (0..system.mesh.num_elements())
                .map(|e| gts.state(e).to_vec())
                .collect();
            (states, gts.step_log().to_vec(), gts.counters().clone())
        }
        RunMode::Lts | RunMode::LtsConstant => {
            let mut opts = LtsOptions::new(config.order);
            opts.resolution = config.resolution();
            opts.record_steps = config.record_steps;
            opts.mode = if config.mode == RunMode::Lts {
                SteppingMode::Local
            } else {
                SteppingMode::Shared
            };
            let mut lts = LtsIntegrator::self_start(
                &system,
                initial,
                t0,
                t_end,
                config.initial_step_ticks(),
                opts,
            );
            loop {
                match lts.advance()? {
                    AdvanceOutcome::Finished => break,
                    AdvanceOutcome::Advanced { tick } => {
                        if lts.synchronized_tick() == Some(tick) {
                            let states: Vec<Vec<f64>> = (0..system.mesh.num_elements())
                                .map(|e| lts.state(e).to_vec())
                                .collect();
                            trace.push((
                                tick as f64 * config.resolution().tick_size(),
                                system.mesh.conserved_integral(&states),
                            ));
                        }
                    }
                }
            }
            let states: Vec<Vec<f64>> = (0..system.mesh.num_elements())
                .map(|e| lts.state(e).to_vec())
                .collect();
            let log = lts.drain_step_log();
            (states, log, lts.counters().clone())
        }
    };

    let wall_seconds = start.elapsed().as_secs_f64();
    let final_linf_error = match config.problem {
        Problem::Bump => {
            let refs: Vec<&[f64]> = final_states.iter().map(|v| v.as_slice()).collect();
            Some(system.linf_error(&refs, t_end.to_f64())?)
        }
        Problem::Wave => None,
    };
    let max_rel_drift = (trace.len() > 1).then(|| {
        trace
            .iter()
            .map(|&(_, c)| (c - c0).abs() / c0.abs())
            .fold(0.0, f64::max)
    });
    let report = RunReport {
        mode: config.mode,
        order: config.order,
        cfl_threshold: config.cfl_threshold,
        final_linf_error,
        conservation_trace: trace,
        max_rel_drift,
        steps_per_set: counters.steps_per_set.clone(),
        total_steps: counters.steps_per_set.iter().sum(),
        volume_evals: counters.volume_evals,
        coupling_evals: counters.coupling_evals,
        min_step_ticks: counters.min_step_ticks,
        wall_seconds,
    };
    Ok(RunOutput {
        report,
        final_states,
        step_log,
        mesh: system.mesh,
    })
}

/// One row of a convergence sweep.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub order: usize,
    pub cfl_threshold: f64,
    pub linf_error: f64,
    /// Least-squares slope of log(error) against log(threshold) over every
    /// point of this row's order, repeated on each row.
    pub fitted_slope: f64,
    /// Slope over the resolved points only: errors within 10x of the
    /// sweep's smallest error sit at the discretization/roundoff floor and
    /// are excluded from this fit.
    pub resolved_slope: f64,
}

/// Sweep the bump problem over orders and thresholds and fit per-order
/// convergence slopes.
pub fn run_convergence(
    base: &RunConfig,
    orders: &[usize],
    thresholds: &[f64],
) -> Result<Vec<ConvergenceRow>, RunError> {
    let mut rows = Vec::new();
    for &order in orders {
        let mut points = Vec::new();
        for &threshold in thresholds {
            let mut config = base.clone();
            config.problem = Problem::Bump;
            config.order = order;
            config.cfl_threshold = threshold;
            let out = run_evolution(&config)?;
            let err = out
                .report
                .final_linf_error
                .expect("bump has exact solution");
            points.push((threshold, err));
        }
        let slope = log_log_slope(&points);
        let resolved = resolved_slope(&points);
        for (threshold, err) in points {
            rows.push(ConvergenceRow {
                order,
                cfl_threshold: threshold,
                linf_error: err,
                fitted_slope: slope,
                resolved_slope: resolved,
            });
        }
    }
    Ok(rows)
}

/// Slope over the points that rise above the error floor (more than 10x
/// the smallest error of the sweep).  Diverged runs (non-finite error) are
/// never fit; with fewer than two resolved points the fit falls back to
/// every finite point.
pub fn resolved_slope(points: &[(f64, f64)]) -> f64 {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(_, e)| e.is_finite())
        .collect();
    if finite.len() < 2 {
        return f64::NAN;
    }
    let floor = finite.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    let resolved: Vec<(f64, f64)> = finite
        .iter()
        .copied()
        .filter(|&(_, e)| e > 10.0 * floor)
        .collect();
    if resolved.len() >= 2 {
        log_log_slope(&resolved)
    } else {
        log_log_slope(&finite)
    }
}

/// Least-squares slope of ln(y) versus ln(x).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.max(f64::MIN_POSITIVE).ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Reports of the same problem under the three stepping modes, with the
/// step-count and evaluation-count ratios of the global scheme over the
/// local one.
#[derive(Clone, Debug)]
pub struct SpeedComparison {
    pub gts: RunReport,
    pub lts: RunReport,
    pub lts_constant: RunReport,
    pub step_ratio_gts_over_lts: f64,
    pub eval_ratio_gts_over_lts: f64,
    pub wall_ratio_gts_over_lts: f64,
}

pub fn run_speed(base: &RunConfig) -> Result<SpeedComparison, RunError> {
    let mut lts_cfg = base.clone();
    lts_cfg.mode = RunMode::Lts;
    let lts = run_evolution(&lts_cfg)?.report;
    let mut gts_cfg = base.clone();
    gts_cfg.mode = RunMode::Gts;
    let gts = run_evolution(&gts_cfg)?.report;
    let mut const_cfg = base.clone();
    const_cfg.mode = RunMode::LtsConstant;
    let lts_constant = run_evolution(&const_cfg)?.report;
    let step_ratio = gts.total_steps as f64 / lts.total_steps as f64;
    let eval_ratio = gts.volume_evals as f64 / lts.volume_evals as f64;
    let wall_ratio = gts.wall_seconds / lts.wall_seconds.max(1e-12);
    Ok(SpeedComparison {
        gts,
        lts,
        lts_constant,
        step_ratio_gts_over_lts: step_ratio,
        eval_ratio_gts_over_lts: eval_ratio,
        wall_ratio_gts_over_lts: wall_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_wave(mode: RunMode) -> RunConfig {
        let mut c = RunConfig::defaults(Problem::Wave);
        c.elements = 8;
        c.nodes_per_element = 6;
        c.order = 3;
        c.mode = mode;
        c.cfl_threshold = 2f64.powi(-9);
        c.t_end_rational = (1, 16);
        c.initial_step_exponent = -18;
        c.record_steps = true;
        c
    }

    #[test]
    fn short_wave_run_is_conservative_and_stable() {
        let out = run_evolution(&quick_wave(RunMode::Lts)).unwrap();
        let r = &out.report;
        assert!(
            r.max_rel_drift.unwrap() < 1e-12,
            "drift {:?}",
            r.max_rel_drift
        );
        assert!(r.total_steps > 0);
        assert!(out.final_states.iter().flatten().all(|u| u.is_finite()));
        // step log covers the full span for every element
        for set in 0..8 {
            let total: i64 = out
                .step_log
                .iter()
                .filter(|e| e.set == set)
                .map(|e| e.size_ticks)
                .sum();
            let span = out.step_log.iter().filter(|e| e.set == set).count();
            assert!(span > 0);
            assert_eq!(total, (1i64 << 40) / 16, "set {set}");
        }
    }

    #[test]
    fn constant_step_mode_matches_gts_trajectory_and_steps() {
        let gts = run_evolution(&quick_wave(RunMode::Gts)).unwrap();
        let cst = run_evolution(&quick_wave(RunMode::LtsConstant)).unwrap();
        assert_eq!(gts.report.total_steps, cst.report.total_steps);
        assert_eq!(gts.report.steps_per_set, cst.report.steps_per_set);
        for (a, b) in gts
            .final_states
            .iter()
            .flatten()
            .zip(cst.final_states.iter().flatten())
        {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn zero_length_span_reports_the_initial_sampling_error() {
        let mut c = RunConfig::defaults(Problem::Bump);
        c.t_end_rational = c.t0_rational;
        let out = run_evolution(&c).unwrap();
        assert_eq!(out.report.total_steps, 0);
        // nodal samples of the exact solution have no deviation at nodes
        assert_eq!(out.report.final_linf_error, Some(0.0));
    }

    #[test]
    fn gts_wave_baseline_also_conserves() {
        let out = run_evolution(&quick_wave(RunMode::Gts)).unwrap();
        assert!(out.report.max_rel_drift.unwrap() < 1e-12);
    }

    #[test]
    fn short_bump_run_converges_reasonably() {
        let mut c = RunConfig::defaults(Problem::Bump);
        c.elements = 8;
        c.nodes_per_element = 8;
        c.order = 3;
        c.cfl_threshold = 2f64.powi(-9);
        c.t_end_rational = (0, 1); // -1/8 .. 0
        c.initial_step_exponent = -18;
        let out = run_evolution(&c).unwrap();
        let err = out.report.final_linf_error.unwrap();
        assert!(err < 1e-5, "bump error {err}");
    }
}
