//! Benchmark harness: dataset generation, procedure runs, result records and reports.

pub mod cli;
pub mod error;
pub mod io;
pub mod record;
pub mod report;
pub mod runner;
pub mod settings;

pub use error::{BenchError, Result};
