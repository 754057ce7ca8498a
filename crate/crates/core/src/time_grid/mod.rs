//! Exact evaluation-time sequences and union grids.
//!
//! All evaluation times are dyadic rationals stored as integer counts of
//! ticks at a global binary resolution (one tick = 2^r time units).  Integer
//! ticks make time comparison, grid merging, and coefficient-table lookups
//! exact: two times are equal iff their tick counts are equal.

mod textio;
mod tick;
mod union;

pub use textio::{parse_grid, write_grid};
pub use tick::{Resolution, TickTime};
pub use union::{SetSelection, StepSequence, UnionGrid};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TimeGridError {
    /// The requested time is not an integer multiple of one tick.
    #[error("time {num}/{den} is not representable at resolution 2^{resolution}")]
    NonRepresentable { num: i64, den: i64, resolution: i32 },
    /// Member sequences do not share a common first time.
    #[error("sequences do not share a common first time")]
    UnsynchronizedStart,
    /// A sequence is empty or its times are not strictly increasing.
    #[error("sequence for set {set} is empty or not strictly increasing")]
    NonMonotonic { set: usize },
    /// The requested set id is not part of the grid.
    #[error("unknown set id {0}")]
    UnknownSet(usize),
    /// Malformed grid text.
    #[error("grid parse error: {0}")]
    Parse(String),
}
