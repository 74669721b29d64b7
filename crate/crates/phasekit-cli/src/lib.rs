//! Library surface of the `phasekit` command-line tool: config parsing and
//! run execution, kept separate from the binary so integration tests can
//! drive them directly.

pub mod config;
pub mod run;
