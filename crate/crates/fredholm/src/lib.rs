//! Command-line driver and file formats for `fredholm-core`: symbol
//! literals, JSON and CSV outputs, run files, and thread-parallel versions
//! of the grid, path and energy scans.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;
pub mod symbol_json;
