//! Library surface of the command-line tool, split out so integration
//! tests can exercise configuration parsing and the manifest round trip
//! directly.

pub mod commands;
pub mod config;
