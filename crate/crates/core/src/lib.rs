//! Conservative local time-stepping (LTS) Adams-Bashforth integration.
//!
//! This crate implements explicit Adams-Bashforth multistep integration of
//! arbitrary order where independent sets of degrees of freedom advance with
//! independent, time-varying step sizes.  The update coefficients are chosen
//! so that every linear conserved quantity of the system stays constant to
//! roundoff, and the full convergence order of the underlying Adams-Bashforth
//! method is retained.
//!
//! The main pieces are:
//!
//! - [`time_grid`]: exact dyadic evaluation times as integer ticks, merged
//!   union grids of several step sequences, and the index maps between them.
//! - [`coefficients`]: Adams-Bashforth and mixed-time coupling coefficient
//!   tables, generated exactly in rational arithmetic or in floating point.
//! - [`integrator`]: the evolution engine — history ring buffers, the
//!   power-of-two step controller, the union-time scheduler, and a global
//!   (single-rate) reference integrator.
//! - [`dg_burgers`]: a 1D nodal discontinuous Galerkin discretization of the
//!   Burgers equation with HLL interface fluxes, used as the test system.
//! - [`harness`]: experiment drivers (convergence, conservation, step-count
//!   comparisons) behind the command-line interface.
//! - [`verify`]: golden coefficient tables, random grid generators, and the
//!   exact identity checks used by the test suite and `selftest`.

// indexed loops mirror the stencil formulas throughout the numeric kernels
#![allow(clippy::needless_range_loop)]

pub mod coefficients;
pub mod dg_burgers;
pub mod harness;
pub mod integrator;
pub mod time_grid;
pub mod verify;

pub use coefficients::Rational;
pub use time_grid::{Resolution, StepSequence, TickTime, UnionGrid};
