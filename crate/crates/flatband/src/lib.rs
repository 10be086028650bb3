//! Command line, file formats and parallel scans on top of `flatband-core`.

pub mod cli;
pub mod config;
pub mod fixtures;
pub mod output;
pub mod parallel;
