//! Library behind the `entcap` binary: settings, sweeps, single points,
//! CSV output and plot scripts.

pub mod config;
pub mod error;
pub mod params;
pub mod plot;
pub mod point;
pub mod selftest;
pub mod sweep;

pub use error::{CliError, Result};
