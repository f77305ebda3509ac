//! Rating emulators, acquisition functions and the active-selection training
//! loop used to compare skill-rating systems on historical match data.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation; file formats, parallel drivers and the command-line tool live
//! in the `skillbench` crate.
//!
//! The pieces fit together like this:
//!
//! * [`data`] holds matches, teams and the mutable training pool.
//! * [`emulator`] wraps each rating system (WinRate, Elo, Glicko-2, TrueSkill
//!   per team and per player) behind the [`Emulator`] trait.
//! * [`acquisition`] scores candidate matches; the simulator feeds the
//!   highest-scoring one to the emulator.
//! * [`simulator`] runs the select/fit loop and evaluates accuracy.
//! * [`sensitivity`] sweeps TrueSkill parameters and smooths the result with
//!   [`gp`] regression.
//! * [`synth`] generates datasets with known latent skills.

#![no_std]

extern crate alloc;

pub mod acquisition;
pub mod data;
pub mod emulator;
pub mod error;
pub mod gauss;
pub mod gp;
pub mod sensitivity;
pub mod simulator;
pub mod synth;

pub use acquisition::{AcquisitionSpec, WeightedParams};
pub use data::{DatasetSplit, MatchDataset, MatchId, MatchRecord, Names, Outcome, PlayerId, Team, TeamId};
pub use emulator::{AnyEmulator, Emulator, EmulatorSpec};
pub use error::{Error, Result};
pub use simulator::{ExperimentReport, SimulatorConfig, TrainingCurve};

/// Seeded generator used throughout the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
