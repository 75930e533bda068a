//! Command line companion to `strata-core`: JSON formats, the `strata-kit`
//! front end, an on-disk Hom cache, brute-force oracles and the acceptance suite.

pub mod cache;
pub mod cli;
pub mod error;
pub mod format;
pub mod oracle;
pub mod selftest;

pub use error::CliError;
pub use strata_core;
