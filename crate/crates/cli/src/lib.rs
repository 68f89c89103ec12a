//! Command-line front end for `cdg-core`: argument parsing, parallel
//! drivers and CSV/JSON rendering.

pub mod commands;
pub mod config;
pub mod format;
pub mod parallel;
pub mod primes;

pub use commands::run;
pub use config::Cli;
