//! File formats and the command-line front end for `sinvaut-core`.

pub mod cli;
pub mod format;

pub use cli::{run, Outcome, Report};
