//! Small coupled systems with known exact behavior, used by the test suite
//! and the `selftest` command.

use crate::integrator::CoupledSystem;

/// Two scalar sets with volume `lambda * y` and an antisymmetric linear
/// exchange coupling `sigma * (other - self)`.
///
/// The constant vector (1, 1) is a linear conserved quantity whenever
/// `lambda = 0`.
pub struct LinearExchangePair {
    pub lambda: f64,
    pub sigma: f64,
}

impl CoupledSystem for LinearExchangePair {
    fn num_sets(&self) -> usize {
        2
    }
    fn state_len(&self, _set: usize) -> usize {
        1
    }
    fn volume(&self, _set: usize, _t: f64, y: &[f64], out: &mut [f64]) {
        out[0] = self.lambda * y[0];
    }
    fn num_faces(&self) -> usize {
        1
    }
    fn face_sets(&self, _face: usize) -> (usize, usize) {
        (0, 1)
    }
    fn face_coupling(
        &self,
        _face: usize,
        y_left: &[f64],
        y_right: &[f64],
        out_left: &mut [f64],
        out_right: &mut [f64],
    ) {
        out_left[0] = self.sigma * (y_right[0] - y_left[0]);
        out_right[0] = self.sigma * (y_left[0] - y_right[0]);
    }
    fn max_stable_step(&self, _set: usize, _y: &[f64]) -> f64 {
        f64::INFINITY
    }
}

/// Two sets each carrying a clock and an accumulator.  The accumulator of
/// one set integrates a polynomial of the *other* set's clock, so the exact
/// solution is polynomial in time and every coupling evaluation mixes
/// evaluation times.  Degree at most k-1 must integrate to roundoff under
/// any admissible step pattern.
pub struct PolynomialCouplingPair {
    /// Degree of the integrated polynomial (the clock power).
    pub degree: u32,
}

impl PolynomialCouplingPair {
    /// Exact accumulator value at time t starting from zero at t0.
    pub fn exact(&self, t0: f64, t: f64) -> f64 {
        let p = self.degree + 1;
        (t.powi(p as i32) - t0.powi(p as i32)) / p as f64
    }
}

impl CoupledSystem for PolynomialCouplingPair {
    fn num_sets(&self) -> usize {
        2
    }
    fn state_len(&self, _set: usize) -> usize {
        2
    }
    fn volume(&self, _set: usize, _t: f64, _y: &[f64], out: &mut [f64]) {
        out[0] = 1.0; // the clock
        out[1] = 0.0;
    }
    fn num_faces(&self) -> usize {
        1
    }
    fn face_sets(&self, _face: usize) -> (usize, usize) {
        (0, 1)
    }
    fn face_coupling(
        &self,
        _face: usize,
        y_left: &[f64],
        y_right: &[f64],
        out_left: &mut [f64],
        out_right: &mut [f64],
    ) {
        out_left[0] = 0.0;
        out_left[1] = y_right[0].powi(self.degree as i32);
        out_right[0] = 0.0;
        out_right[1] = y_left[0].powi(self.degree as i32);
    }
    fn max_stable_step(&self, _set: usize, _y: &[f64]) -> f64 {
        f64::INFINITY
    }
}
