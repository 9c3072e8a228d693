//! Frame (extreme-efficient DMU) identification for VRS data envelopment
//! analysis, with a dense simplex solver and a synthetic data generator.

pub mod buildhull;
pub mod config;
pub mod datagen;
pub mod dea;
pub mod ehd;
pub mod error;
pub mod lp;
pub mod oracle;
pub mod phase2;
pub mod preprocess;

pub use config::{SolveConfig, Tolerances};
pub use dea::Dataset;
pub use error::{DeaError, Result};
