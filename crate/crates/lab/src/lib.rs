//! Configuration, artifacts and command drivers for the `rdlab` binary.
//!
//! The numerics live in `rdlab_core`; this crate reads dotted-key config
//! files, runs the requested computation and writes CSV, JSON and SVG
//! artifacts together with a manifest.

// `!(x > 0.0)` is how config values reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod commands;
pub mod config;
mod error;
pub mod exec;
pub mod svg;
pub mod table;

pub use error::{LabError, Result};
