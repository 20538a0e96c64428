//! Command-line front end: run configuration, the four commands, and their
//! on-disk artifacts. All numerical work lives in the `nnadapt` crate; this
//! crate owns persistence, logging, and the benchmark harness.

pub mod commands;
pub mod config;
pub mod stats;
