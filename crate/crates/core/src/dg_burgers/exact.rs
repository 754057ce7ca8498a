//! Exact reference solutions of the Burgers equation used by the tests.

use super::DgError;

/// Smooth solution evolving from the parabolic bump u(0, x) = 1 - x^2,
/// in the form that stays regular at t = 0.
pub fn bump_solution(t: f64, x: f64) -> Result<f64, DgError> {
    let radicand = 1.0 - 4.0 * t * (x - t);
    if radicand < 0.0 {
        return Err(DgError::OutOfDomain { t, x });
    }
    let root = radicand.sqrt();
    Ok(2.0 * (root + 1.0 - 2.0 * x * (x - t)) / ((root + 1.0) * (root + 1.0)))
}

/// Periodic initial data on a domain of length 5/4.
pub fn wave_initial(x: f64) -> f64 {
    (8.0 * std::f64::consts::PI / 5.0 * x).sin().exp() / std::f64::consts::E
}

/// Time at which the periodic wave forms a shock.
pub fn shock_time() -> f64 {
    use std::f64::consts::{E, PI};
    let s = (5f64.sqrt() - 1.0) / 2.0;
    5.0 * E / (8.0 * PI) / (s.exp() * s.sqrt())
}
