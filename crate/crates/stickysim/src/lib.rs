//! File formats, plots, experiments and the command-line front end for the
//! sticky-particle engine in `stickysim-core`.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod output;
pub mod schema;

pub use error::{Error, Result};
pub use stickysim_core as core;
