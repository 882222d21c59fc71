//! Multi-class classifier performance measures on confusion matrices.
//!
//! The crate covers Accuracy, the multi-class Matthews Correlation
//! Coefficient, Confusion Entropy and the transformed MCC that tracks
//! `k(N) * CEN`, together with analytic matrix families, pairwise measure
//! comparison statistics and the building blocks of a seeded Monte-Carlo
//! experiment.
//!
//! Everything here is `no_std` and only needs `alloc`. File formats, the
//! parallel experiment driver and the command line live in the `cenmcc`
//! crate.
//!
//! Class indices are 0-based throughout this crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod comparison;
mod error;
pub mod experiment;
pub mod families;
mod matrix;
pub mod metrics;
pub mod rng;

pub use error::{ComparisonError, ConfigError, FamilyError, MatrixError, MetricError};
pub use matrix::{ConfusionMatrix, Marginals};
pub use metrics::MetricReport;
