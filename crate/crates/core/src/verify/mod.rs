//! Golden data and exact identity checks shared by the test suite and the
//! `selftest` command.

pub mod checks;
pub mod golden;
pub mod randgrid;
pub mod toys;
