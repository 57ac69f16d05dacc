//! Benchmark definitions, metrics and result files.

pub mod cases;
pub mod config;
pub mod io;
pub mod metrics;
pub mod runs;
