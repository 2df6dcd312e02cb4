//! Command-line workbench around the core library: the `.mla` file format
//! and the `mslaw` subcommands.
//!
//! The library surface exists so integration tests can drive the full
//! command pipeline in-process through [`run`] with a captured writer.

pub mod commands;
pub mod mla;

pub use commands::run;
