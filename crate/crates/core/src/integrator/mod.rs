//! Time-evolution engine.
//!
//! A system is a collection of degree-of-freedom sets whose derivatives
//! split into a self-contained volume part and face-local couplings.  Each
//! set advances with its own power-of-two step size; the coupling terms mix
//! evaluation times of the two sets sharing a face using accumulated
//! coefficient tables, which makes the evolution linearly conservative and
//! keeps the full Adams-Bashforth convergence order.

pub mod controller;
mod gts;
mod history;
mod scheduler;
mod split_rk2;

pub use gts::GtsIntegrator;
pub use history::{FaceCache, FaceValue, Record, SetHistory};
pub use scheduler::{
    AdvanceOutcome, EvalCounters, LtsIntegrator, LtsOptions, StepLogEntry, SteppingMode,
};
pub use split_rk2::split_midpoint_step;

use thiserror::Error;

/// A system of coupled degree-of-freedom sets with face-local couplings.
///
/// The derivative of set `s` is `V_s(t, y_s)` plus, for every face touching
/// `s`, the face's coupling restricted to `s`.  The volume part receives
/// the evaluation time so that boundary data with explicit time dependence
/// can live there; couplings are functions of the two adjacent states only.
pub trait CoupledSystem {
    fn num_sets(&self) -> usize;
    fn state_len(&self, set: usize) -> usize;

    /// Volume derivative of one set, written into `out`.
    fn volume(&self, set: usize, t: f64, y: &[f64], out: &mut [f64]);

    fn num_faces(&self) -> usize;

    /// The two sets a face couples, as (left, right).
    fn face_sets(&self, face: usize) -> (usize, usize);

    /// Coupling of one face evaluated from the two adjacent states; the
    /// restrictions to the left and right sets are written into
    /// `out_left` and `out_right`.
    fn face_coupling(
        &self,
        face: usize,
        y_left: &[f64],
        y_right: &[f64],
        out_left: &mut [f64],
        out_right: &mut [f64],
    );

    /// Largest stable step for one set in its current state, in time units.
    fn max_stable_step(&self, set: usize, y: &[f64]) -> f64;
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("set {set} lacks history for an order-{order} step")]
    InsufficientHistory { set: usize, order: usize },
    #[error("missing coupling record for face {face} at ticks ({left}, {right})")]
    MissingCouplingRecord { face: usize, left: i64, right: i64 },
    #[error("coefficient generation failed: {0}")]
    Coeff(#[from] crate::coefficients::CoeffError),
}
