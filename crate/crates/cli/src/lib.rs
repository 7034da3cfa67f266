//! Command-line front end: a provenance-tagged table of closed-form
//! complexity values and JSON wrappers around the core engine.

pub mod commands;
pub mod knowledge;

pub use commands::{run, SCHEMA};
