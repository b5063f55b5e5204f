//! Command-line front end: instance and trace files, subcommands.

pub mod cli;
pub mod commands;
pub mod ineq;
pub mod instance;
pub mod json;
pub mod trace;
