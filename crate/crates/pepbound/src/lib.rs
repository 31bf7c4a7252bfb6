//! Experiment harness for `pepbound-core`: runs the eigenvector error-bound
//! experiments, reads and writes polynomial, CSV and SVG files, and backs the
//! `pepbound` command-line tool.

pub mod bench;
mod error;
pub mod formats;
pub mod verify;

pub use error::{BenchError, Result};
