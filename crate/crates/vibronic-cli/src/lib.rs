//! Implementation of the `vibronic` command-line tool.
//!
//! Three subcommands drive the library: `sweep` runs one overlap method
//! over its displacement grid, `truncation` tabulates basis-truncation
//! deviations from the closed forms, and `noise` runs the Monte Carlo
//! readout-noise study over both emulated pipelines. Settings come from
//! flags, then a flat `key = value` file, then per-command defaults; every
//! output is CSV with twelve significant digits and reads back losslessly.

pub mod config;
pub mod output;
pub mod run;
