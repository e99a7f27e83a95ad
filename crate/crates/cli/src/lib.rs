//! Library surface of the `mcs` command-line driver: system-definition
//! files, machine-readable reports, and the command implementations.

pub mod commands;
pub mod report;
pub mod systemfile;
