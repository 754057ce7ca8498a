//! Run configuration, including the key-value text format.

use super::RunError;
use crate::time_grid::{Resolution, TickTime};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Periodic wave on identified endpoints.
    Wave,
    /// Smooth bump with analytic boundary traces.
    Bump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Gts,
    Lts,
    /// Local machinery forced onto one shared step size.
    LtsConstant,
}

impl std::fmt::Display for RunMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunMode::Gts => write!(f, "gts"),
            RunMode::Lts => write!(f, "lts"),
            RunMode::LtsConstant => write!(f, "lts-constant"),
        }
    }
}

/// Parameters of one evolution.  Times are exact dyadic rationals stored as
/// (numerator, denominator) pairs so configurations stay bit-precise.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Problem,
    pub order: usize,
    pub elements: usize,
    pub nodes_per_element: usize,
    pub domain_lo: f64,
    pub domain_hi: f64,
    pub mode: RunMode,
    /// Maximum allowed |u| * dt.
    pub cfl_threshold: f64,
    /// Start and end times as exact fractions.
    pub t0_rational: (i64, i64),
    pub t_end_rational: (i64, i64),
    /// Initial step = 2^exponent time units.
    pub initial_step_exponent: i32,
    /// One tick = 2^exponent time units.
    pub resolution_exponent: i32,
    pub record_steps: bool,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    /// Standard defaults for a problem: 16 elements of 10 nodes on
    /// [-9/8, 1/8], initial step 2^-27, tick 2^-40.
    pub fn defaults(problem: Problem) -> Self {
        let (t0, t_end) = match problem {
            Problem::Wave => ((0, 1), (1, 2)),
            Problem::Bump => ((-1, 8), (3, 2)),
        };
        RunConfig {
            problem,
            order: 4,
            elements: 16,
            nodes_per_element: 10,
            domain_lo: -9.0 / 8.0,
            domain_hi: 1.0 / 8.0,
            mode: RunMode::Lts,
            cfl_threshold: 2f64.powi(-12),
            t0_rational: t0,
            t_end_rational: t_end,
            initial_step_exponent: -27,
            resolution_exponent: -40,
            record_steps: false,
            out_dir: PathBuf::from("out"),
            seed: 0,
        }
    }

    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.resolution_exponent)
    }

    pub fn t0(&self) -> Result<TickTime, RunError> {
        self.resolution()
            .ticks_of(self.t0_rational.0, self.t0_rational.1)
            .map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn t_end(&self) -> Result<TickTime, RunError> {
        self.resolution()
            .ticks_of(self.t_end_rational.0, self.t_end_rational.1)
            .map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn initial_step_ticks(&self) -> i64 {
        let shift = self.initial_step_exponent - self.resolution_exponent;
        assert!(shift >= 0, "initial step finer than the tick resolution");
        1i64 << shift
    }
}

/// Parse `key value` lines (with `#` comments) onto a configuration.
pub fn parse_config_text(text: &str, base: RunConfig) -> Result<RunConfig, RunError> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, char::is_whitespace);
        let key = parts.next().unwrap().to_string();
        let value = parts
            .next()
            .ok_or_else(|| RunError::Config(format!("line {}: missing value", lineno + 1)))?
            .trim()
            .to_string();
        map.insert(key, value);
    }
    apply_options(base, &map)
}

/// Apply `key value` overrides (the config-file keys) onto a configuration.
pub fn apply_options(
    mut c: RunConfig,
    map: &BTreeMap<String, String>,
) -> Result<RunConfig, RunError> {
    let bad = |k: &str, v: &str| RunError::Config(format!("bad value for {k}: {v:?}"));
    for (k, v) in map {
        match k.as_str() {
            "problem" => {
                c.problem = match v.as_str() {
                    "wave" => Problem::Wave,
                    "bump" => Problem::Bump,
                    _ => return Err(bad(k, v)),
                };
                let d = RunConfig::defaults(c.problem);
                c.t0_rational = d.t0_rational;
                c.t_end_rational = d.t_end_rational;
            }
            "order" => c.order = v.parse().map_err(|_| bad(k, v))?,
            "elements" => c.elements = v.parse().map_err(|_| bad(k, v))?,
            "nodes" => c.nodes_per_element = v.parse().map_err(|_| bad(k, v))?,
            "mode" => {
                c.mode = match v.as_str() {
                    "gts" => RunMode::Gts,
                    "lts" => RunMode::Lts,
                    "lts-constant" => RunMode::LtsConstant,
                    _ => return Err(bad(k, v)),
                }
            }
            "cfl_threshold" => c.cfl_threshold = parse_threshold(v).ok_or_else(|| bad(k, v))?,
            "t0" => c.t0_rational = parse_fraction(v).ok_or_else(|| bad(k, v))?,
            "t_end" => c.t_end_rational = parse_fraction(v).ok_or_else(|| bad(k, v))?,
            "initial_step_exponent" => {
                c.initial_step_exponent = v.parse().map_err(|_| bad(k, v))?
            }
            "resolution_exponent" => c.resolution_exponent = v.parse().map_err(|_| bad(k, v))?,
            "record_steps" => c.record_steps = v.parse().map_err(|_| bad(k, v))?,
            "out_dir" => c.out_dir = PathBuf::from(v),
            "seed" => c.seed = v.parse().map_err(|_| bad(k, v))?,
            _ => return Err(RunError::Config(format!("unknown key {k:?}"))),
        }
    }
    if !(1..=8).contains(&c.order) {
        return Err(RunError::Config(format!("order {} outside 1..=8", c.order)));
    }
    Ok(c)
}

/// Fractions like `-9/8`, plain integers, or power-of-two notation `2^-12`.
pub fn parse_fraction(s: &str) -> Option<(i64, i64)> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^") {
        let e: i32 = exp.parse().ok()?;
        return if e >= 0 {
            Some((1i64.checked_shl(e as u32)?, 1))
        } else {
            Some((1, 1i64.checked_shl((-e) as u32)?))
        };
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        (d != 0).then_some((n, d))
    } else {
        s.parse::<i64>().ok().map(|n| (n, 1))
    }
}

/// Thresholds accept fractions, `2^-12`, or plain floats.
pub fn parse_threshold(s: &str) -> Option<f64> {
    if let Some((n, d)) = parse_fraction(s) {
        return Some(n as f64 / d as f64);
    }
    s.trim().parse::<f64>().ok().filter(|v| *v > 0.0)
}
