//! Matches, teams and the training pool the simulator draws from.
//!
//! Identifiers are interned: [`Names`] maps the opaque string ids found in
//! input files onto dense `u32` handles so the emulators can keep their
//! ratings in flat vectors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rng;

/// Players per side.
pub const ROSTER_SIZE: usize = 5;

macro_rules! handle {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

handle!(
    /// Interned team identifier.
    TeamId
);
handle!(
    /// Interned player identifier.
    PlayerId
);
handle!(
    /// Interned match identifier, unique within a dataset.
    MatchId
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Team {
    pub id: TeamId,
    pub roster: [PlayerId; ROSTER_SIZE],
}

impl Team {
    /// Builds a team, rejecting rosters that are not exactly five distinct players.
    pub fn new(id: TeamId, roster: &[PlayerId]) -> Result<Self> {
        let roster: [PlayerId; ROSTER_SIZE] = roster.try_into().map_err(|_| Error::RosterSize(roster.len()))?;
        for (i, p) in roster.iter().enumerate() {
            if roster[i + 1..].contains(p) {
                return Err(Error::DuplicatePlayer);
            }
        }
        Ok(Self { id, roster })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Win1,
    Win2,
    Draw,
}

impl Outcome {
    /// Score of team 1: 1 for a win, ½ for a draw, 0 for a loss.
    pub fn score1(self) -> f64 {
        match self {
            Outcome::Win1 => 1.0,
            Outcome::Win2 => 0.0,
            Outcome::Draw => 0.5,
        }
    }

    pub fn is_draw(self) -> bool {
        self == Outcome::Draw
    }

    /// The same result seen from team 2's side.
    pub fn flipped(self) -> Self {
        match self {
            Outcome::Win1 => Outcome::Win2,
            Outcome::Win2 => Outcome::Win1,
            Outcome::Draw => Outcome::Draw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchRecord {
    pub id: MatchId,
    pub team1: Team,
    pub team2: Team,
    pub outcome: Outcome,
    /// Unix seconds, UTC.
    pub timestamp: i64,
}

impl MatchRecord {
    pub fn new(id: MatchId, team1: Team, team2: Team, outcome: Outcome, timestamp: i64) -> Result<Self> {
        if team1.id == team2.id {
            return Err(Error::SelfMatch);
        }
        Ok(Self { id, team1, team2, outcome, timestamp })
    }

    fn pair_key(&self) -> (TeamId, TeamId) {
        pair_key(self.team1.id, self.team2.id)
    }
}

fn pair_key(a: TeamId, b: TeamId) -> (TeamId, TeamId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// String ⇄ dense handle table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interner {
    names: Vec<String>,
    lookup: BTreeMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.lookup.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(String::from(name));
        self.lookup.insert(String::from(name), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Name tables for teams, players and matches of one dataset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Names {
    pub teams: Interner,
    pub players: Interner,
    pub matches: Interner,
}

impl Names {
    pub fn team(&mut self, name: &str) -> TeamId {
        TeamId(self.teams.intern(name))
    }

    pub fn player(&mut self, name: &str) -> PlayerId {
        PlayerId(self.players.intern(name))
    }

    pub fn team_name(&self, id: TeamId) -> &str {
        self.teams.name(id.0).unwrap_or("?")
    }

    pub fn player_name(&self, id: PlayerId) -> &str {
        self.players.name(id.0).unwrap_or("?")
    }

    pub fn match_name(&self, id: MatchId) -> &str {
        self.matches.name(id.0).unwrap_or("?")
    }
}

/// A set of matches with a team-pair index.
///
/// Records are kept in insertion order until the first [`pop`](Self::pop);
/// popping swaps the last record into the vacated slot.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchDataset {
    records: Vec<MatchRecord>,
    slots: BTreeMap<MatchId, usize>,
    index: BTreeMap<(TeamId, TeamId), Vec<MatchId>>,
}

impl MatchDataset {
    pub fn from_records(records: Vec<MatchRecord>) -> Result<Self> {
        let mut slots = BTreeMap::new();
        let mut index: BTreeMap<_, Vec<MatchId>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            if slots.insert(r.id, i).is_some() {
                return Err(Error::DuplicateMatch(r.id));
            }
            index.entry(r.pair_key()).or_default().push(r.id);
        }
        Ok(Self { records, slots, index })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[MatchRecord] {
        &self.records
    }

    pub fn iter(&self) -> core::slice::Iter<'_, MatchRecord> {
        self.records.iter()
    }

    pub fn get(&self, id: MatchId) -> Option<&MatchRecord> {
        self.slots.get(&id).map(|&i| &self.records[i])
    }

    pub fn contains(&self, id: MatchId) -> bool {
        self.slots.contains_key(&id)
    }

    /// Ids of the matches between `a` and `b`, in either orientation.
    pub fn pair_matches(&self, a: TeamId, b: TeamId) -> &[MatchId] {
        self.index.get(&pair_key(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of non-draw records.
    pub fn decisive_len(&self) -> usize {
        self.records.iter().filter(|r| !r.outcome.is_draw()).count()
    }

    /// Removes a record from the pool and returns it.
    pub fn pop(&mut self, id: MatchId) -> Result<MatchRecord> {
        let slot = self.slots.remove(&id).ok_or(Error::UnknownMatch(id))?;
        let record = self.records.swap_remove(slot);
        if let Some(moved) = self.records.get(slot) {
            self.slots.insert(moved.id, slot);
        }
        let key = record.pair_key();
        if let Some(ids) = self.index.get_mut(&key) {
            if let Some(pos) = ids.iter().position(|&m| m == id) {
                ids.remove(pos);
            }
            if ids.is_empty() {
                self.index.remove(&key);
            }
        }
        Ok(record)
    }

    /// Draws `min(k, len)` distinct records uniformly without replacement.
    ///
    /// The returned order is the sampling order, which the simulator uses to
    /// break ties.
    pub fn sample_candidates(&self, k: usize, rng: &mut Rng) -> Result<Vec<MatchRecord>> {
        if self.is_empty() {
            return Err(Error::DatasetTooSmall { have: 0, need: 1 });
        }
        let amount = k.min(self.len());
        Ok(index::sample(rng, self.len(), amount).into_iter().map(|i| self.records[i]).collect())
    }

    /// Uniform random partition into `⌈n/2⌉` training and `⌊n/2⌋` evaluation
    /// records. Both halves keep the input order.
    pub fn split(&self, seed: u64) -> Result<DatasetSplit> {
        let n = self.len();
        if n < 2 {
            return Err(Error::DatasetTooSmall { have: n, need: 2 });
        }
        let mut rng = Rng::seed_from_u64(seed);
        let mut in_train = alloc::vec![false; n];
        for i in index::sample(&mut rng, n, n.div_ceil(2)) {
            in_train[i] = true;
        }
        let (train, eval): (Vec<_>, Vec<_>) = self.records.iter().zip(&in_train).partition(|(_, &t)| t);
        let unzip = |v: Vec<(&MatchRecord, &bool)>| v.into_iter().map(|(r, _)| *r).collect();
        Ok(DatasetSplit { train: Self::from_records(unzip(train))?, eval: Self::from_records(unzip(eval))?, seed })
    }
}

impl<'a> IntoIterator for &'a MatchDataset {
    type Item = &'a MatchRecord;
    type IntoIter = core::slice::Iter<'a, MatchRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSplit {
    pub train: MatchDataset,
    pub eval: MatchDataset,
    pub seed: u64,
}
