//! File formats, configuration, parallel drivers and commands built on
//! `skillbench-core`.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod manifest;
pub mod report;
pub mod runner;
pub mod state;
