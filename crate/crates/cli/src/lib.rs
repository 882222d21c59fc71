//! File formats, the parallel experiment driver and measure comparison over
//! enumerated domains, on top of [`cenmcc_core`].
//!
//! The `cenmcc` binary is a thin front end over this library.

pub mod compare;
pub mod csv_io;
pub mod format;
pub mod runner;

pub use cenmcc_core as core;
