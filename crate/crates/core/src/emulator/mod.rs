//! Rating systems wrapped behind a common predict/fit interface.
//!
//! Every emulator also tracks how often it has observed each rated entity
//! (team, or player for [`TrueSkillPlayers`]); the acquisition functions read
//! those counts through [`ObservationCounts`].

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::{MatchRecord, Team};
use crate::error::{Error, Result};

mod counts;
mod elo;
mod glicko2;
mod random;
mod table;
pub mod trueskill;
mod winrate;

pub use counts::{Granularity, ObservationCounts};
pub use elo::{Elo, EloParams};
pub use glicko2::{rate_period, Glicko2, Glicko2Params, Glicko2Rating};
pub use random::RandomEmulator;
pub use trueskill::{TrueSkillParams, TrueSkillPlayers, TrueSkillTeam};
pub use winrate::{WinRate, WinRecord};

/// A skill-rating system seen as a match-outcome predictor.
pub trait Emulator {
    fn name(&self) -> &'static str;

    /// Probability that `team1` beats `team2`.
    fn predict(&self, team1: &Team, team2: &Team) -> f64;

    /// Updates the internal ratings with one observed result. This is the only
    /// mutator.
    fn fit(&mut self, record: &MatchRecord) -> Result<()>;

    fn counts(&self) -> &ObservationCounts;

    /// `c(T)`: how many times the emulator has seen `team` (summed over the
    /// roster for per-player emulators).
    fn seen_count(&self, team: &Team) -> u64 {
        self.counts().team_count(team)
    }

    /// TrueSkill match quality, `None` where the notion does not exist.
    fn quality(&self, _team1: &Team, _team2: &Team) -> Option<f64> {
        None
    }

    /// Number of matches fitted so far.
    fn fitted(&self) -> u64 {
        self.counts().fitted()
    }
}

/// Which rating system to build, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EmulatorSpec {
    Random,
    #[serde(rename = "winrate")]
    WinRate,
    Elo(#[serde(default)] EloParams),
    Glicko2(#[serde(default)] Glicko2Params),
    #[serde(rename = "trueskill")]
    TrueSkill(#[serde(default)] TrueSkillParams),
    #[serde(rename = "tsplayers")]
    TrueSkillPlayers(#[serde(default)] TrueSkillParams),
}

impl EmulatorSpec {
    /// The six emulators with default parameters, in reporting order.
    pub fn all_default() -> [EmulatorSpec; 6] {
        [
            EmulatorSpec::Random,
            EmulatorSpec::WinRate,
            EmulatorSpec::Elo(EloParams::default()),
            EmulatorSpec::Glicko2(Glicko2Params::default()),
            EmulatorSpec::TrueSkill(TrueSkillParams::default()),
            EmulatorSpec::TrueSkillPlayers(TrueSkillParams::default()),
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            EmulatorSpec::Random => "Random",
            EmulatorSpec::WinRate => "WinRate",
            EmulatorSpec::Elo(_) => "Elo",
            EmulatorSpec::Glicko2(_) => "Glicko2",
            EmulatorSpec::TrueSkill(_) => "TrueSkill",
            EmulatorSpec::TrueSkillPlayers(_) => "TSPlayers",
        }
    }

    pub fn is_trueskill(&self) -> bool {
        matches!(self, EmulatorSpec::TrueSkill(_) | EmulatorSpec::TrueSkillPlayers(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EmulatorSpec::Random | EmulatorSpec::WinRate => Ok(()),
            EmulatorSpec::Elo(p) => p.validate(),
            EmulatorSpec::Glicko2(p) => p.validate(),
            EmulatorSpec::TrueSkill(p) | EmulatorSpec::TrueSkillPlayers(p) => p.validate(),
        }
    }

    /// Builds a fresh emulator. `seed` only matters for [`EmulatorSpec::Random`].
    pub fn build(&self, seed: u64) -> Result<AnyEmulator> {
        self.validate()?;
        Ok(match *self {
            EmulatorSpec::Random => AnyEmulator::Random(RandomEmulator::new(seed)),
            EmulatorSpec::WinRate => AnyEmulator::WinRate(WinRate::new()),
            EmulatorSpec::Elo(p) => AnyEmulator::Elo(Elo::new(p)?),
            EmulatorSpec::Glicko2(p) => AnyEmulator::Glicko2(Glicko2::new(p)?),
            EmulatorSpec::TrueSkill(p) => AnyEmulator::TrueSkill(TrueSkillTeam::new(p)?),
            EmulatorSpec::TrueSkillPlayers(p) => AnyEmulator::TrueSkillPlayers(TrueSkillPlayers::new(p)?),
        })
    }
}

/// Any of the built-in emulators. Cloneable, which the cheating acquisition
/// function relies on.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum AnyEmulator {
    Random(RandomEmulator),
    WinRate(WinRate),
    Elo(Elo),
    Glicko2(Glicko2),
    TrueSkill(TrueSkillTeam),
    TrueSkillPlayers(TrueSkillPlayers),
}

macro_rules! dispatch {
    ($self:ident, $e:ident => $body:expr) => {
        match $self {
            AnyEmulator::Random($e) => $body,
            AnyEmulator::WinRate($e) => $body,
            AnyEmulator::Elo($e) => $body,
            AnyEmulator::Glicko2($e) => $body,
            AnyEmulator::TrueSkill($e) => $body,
            AnyEmulator::TrueSkillPlayers($e) => $body,
        }
    };
}

impl Emulator for AnyEmulator {
    fn name(&self) -> &'static str {
        dispatch!(self, e => e.name())
    }

    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        dispatch!(self, e => e.predict(team1, team2))
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        dispatch!(self, e => e.fit(record))
    }

    fn counts(&self) -> &ObservationCounts {
        dispatch!(self, e => e.counts())
    }

    fn quality(&self, team1: &Team, team2: &Team) -> Option<f64> {
        dispatch!(self, e => e.quality(team1, team2))
    }
}

/// Stored rating of one entity, in the emulator's own units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatingValue {
    WinRate(WinRecord),
    Glicko2(Glicko2Rating),
    Gaussian { mean: f64, sigma: f64 },
    Elo { rating: f64 },
    Unrated {},
}

/// One row of an [`EmulatorState`]: an entity index, its observation count and
/// its rating.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityState {
    pub id: u32,
    pub count: u64,
    pub rating: RatingValue,
}

/// Inspectable snapshot of an emulator; ids are dense team or player indices
/// depending on `granularity`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmulatorState {
    pub spec: EmulatorSpec,
    pub granularity: Granularity,
    pub fitted: u64,
    pub entities: Vec<EntityState>,
}

impl AnyEmulator {
    pub fn spec(&self) -> EmulatorSpec {
        match self {
            AnyEmulator::Random(_) => EmulatorSpec::Random,
            AnyEmulator::WinRate(_) => EmulatorSpec::WinRate,
            AnyEmulator::Elo(e) => EmulatorSpec::Elo(e.params()),
            AnyEmulator::Glicko2(e) => EmulatorSpec::Glicko2(e.params()),
            AnyEmulator::TrueSkill(e) => EmulatorSpec::TrueSkill(e.params()),
            AnyEmulator::TrueSkillPlayers(e) => EmulatorSpec::TrueSkillPlayers(e.params()),
        }
    }

    /// Snapshot of every entity that has been observed at least once.
    pub fn state(&self) -> EmulatorState {
        let counts = self.counts();
        let entities = counts.observed().map(|(id, count)| EntityState { id, count, rating: self.rating_of(id) }).collect();
        EmulatorState { spec: self.spec(), granularity: counts.granularity(), fitted: counts.fitted(), entities }
    }

    fn rating_of(&self, id: u32) -> RatingValue {
        let i = id as usize;
        match self {
            AnyEmulator::Random(_) => RatingValue::Unrated {},
            AnyEmulator::WinRate(e) => RatingValue::WinRate(e.record(i)),
            AnyEmulator::Elo(e) => RatingValue::Elo { rating: e.rating(i) },
            AnyEmulator::Glicko2(e) => RatingValue::Glicko2(e.rating(i)),
            AnyEmulator::TrueSkill(e) => gaussian_value(e.rating(i)),
            AnyEmulator::TrueSkillPlayers(e) => gaussian_value(e.rating(i)),
        }
    }

    /// Rebuilds an emulator from a snapshot. The random emulator is reseeded
    /// with `seed`.
    pub fn from_state(state: &EmulatorState, seed: u64) -> Result<Self> {
        let mut emulator = state.spec.build(seed)?;
        if emulator.counts().granularity() != state.granularity {
            return Err(Error::InvalidParameter("granularity does not match emulator".into()));
        }
        for entity in &state.entities {
            let i = entity.id as usize;
            let mismatch = || Error::InvalidParameter(alloc::format!("rating for entity {} has the wrong shape", entity.id));
            match (&mut emulator, entity.rating) {
                (AnyEmulator::Random(_), _) => {}
                (AnyEmulator::WinRate(e), RatingValue::WinRate(r)) => e.set_record(i, r),
                (AnyEmulator::Elo(e), RatingValue::Elo { rating }) => e.set_rating(i, rating),
                (AnyEmulator::Glicko2(e), RatingValue::Glicko2(r)) => e.set_rating(i, r),
                (AnyEmulator::TrueSkill(e), RatingValue::Gaussian { mean, sigma }) => {
                    e.set_rating(i, crate::gauss::Gaussian::new(mean, sigma))
                }
                (AnyEmulator::TrueSkillPlayers(e), RatingValue::Gaussian { mean, sigma }) => {
                    e.set_rating(i, crate::gauss::Gaussian::new(mean, sigma))
                }
                _ => return Err(mismatch()),
            }
            emulator.counts_mut().set(i, entity.count);
        }
        emulator.counts_mut().set_fitted(state.fitted);
        Ok(emulator)
    }

    fn counts_mut(&mut self) -> &mut ObservationCounts {
        dispatch!(self, e => &mut e.counts)
    }
}

fn gaussian_value(g: crate::gauss::Gaussian) -> RatingValue {
    RatingValue::Gaussian { mean: g.mean, sigma: g.std_dev() }
}
