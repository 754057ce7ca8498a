//! Adams-Bashforth and local-time-stepping coefficient generation.
//!
//! Everything here is a pure function of the evaluation-time pattern, exact
//! under the rational backend.  Binary floating point enters only through
//! [`CoeffScalar::to_f64`] (used by the runtime table cache) or by
//! instantiating the same generic code with `f64`.

mod ab;
mod beta;
pub mod cache;
mod lagrange;
mod scalar;
mod twoset;

pub use ab::{ab_coefficients, ab_coefficients_ticks, AbCoeffs};
pub use beta::{
    accumulate_full_step, lts_small_step_beta, marginalize_volume, BetaTable, TableKind, Window,
};
pub use lagrange::{lagrange_eval, lagrange_integral};
pub use scalar::{format_rational, rat, CoeffScalar, Rational};
pub use twoset::two_set_beta;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("interpolation nodes are not pairwise distinct")]
    DuplicateNodes,
    #[error("times are not strictly monotonic")]
    NonMonotonicTimes,
    #[error("not enough evaluation history for the requested order")]
    InsufficientHistory,
    #[error("the requested step is not defined on the grid")]
    UndefinedStep,
    #[error("operation requires exactly two sets")]
    WrongSetCount,
    #[error("table kind does not match the operation")]
    WrongKind,
    #[error("grid error: {0}")]
    Grid(#[from] crate::time_grid::TimeGridError),
}
