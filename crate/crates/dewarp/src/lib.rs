//! Files, batches and the command line around [`dewarp_core`].
//!
//! * [`io`]: image and mask files, written atomically.
//! * [`formats`]: outline and grid JSON, the `DWRP` displacement binary.
//! * [`config`]: TOML run configuration with `key=value` overrides.
//! * [`runner`]: one image through the timed pipeline.
//! * [`batch`]: manifests, the worker pool and timing aggregates.
//! * [`eval`]: metric reports over dewarped/reference pairs.
//! * [`debug`]: intermediate dumps and grid overlays.
//! * [`cli`]: the `dewarp` command.

pub mod batch;
pub mod cli;
pub mod config;
pub mod debug;
mod error;
pub mod eval;
pub mod formats;
pub mod io;
pub mod runner;

pub use config::{OutputFormat, PipelineConfig};
pub use error::{exit, CliError, Result};
pub use runner::{dewarp_one, dewarp_timed, Job, RunRecord, StageTimings};
