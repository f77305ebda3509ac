use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::Team;

/// Which entity an emulator rates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Team,
    Player,
}

/// Per-entity observation counts `c(·)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationCounts {
    granularity: Granularity,
    counts: Vec<u64>,
    total: u64,
    observed: usize,
    fitted: u64,
}

impl ObservationCounts {
    pub fn new(granularity: Granularity) -> Self {
        Self { granularity, counts: Vec::new(), total: 0, observed: 0, fitted: 0 }
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn get(&self, id: usize) -> u64 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    /// Sum of all entity counts.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of entities observed at least once.
    pub fn observed_len(&self) -> usize {
        self.observed
    }

    pub fn fitted(&self) -> u64 {
        self.fitted
    }

    /// `(id, count)` for every entity with a non-zero count, in id order.
    pub fn observed(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i as u32, c))
    }

    /// Entity ids a team contributes: its own id, or its five players.
    pub fn entities<'a>(&self, team: &'a Team) -> impl Iterator<Item = usize> + 'a {
        let per_player = self.granularity == Granularity::Player;
        let team_id = core::iter::once(team.id.index()).filter(move |_| !per_player);
        let players = team.roster.iter().map(|p| p.index()).filter(move |_| per_player);
        team_id.chain(players)
    }

    /// `c(T)`, summing the roster for per-player emulators.
    pub fn team_count(&self, team: &Team) -> u64 {
        self.entities(team).map(|i| self.get(i)).sum()
    }

    /// `Σ ĉ` over every observed entity plus the entities of the two
    /// candidate teams, with `ĉ = c + 1`.
    pub fn smoothed_total(&self, team1: &Team, team2: &Team) -> f64 {
        let mut unseen: [usize; 10] = [usize::MAX; 10];
        let mut n_unseen = 0;
        for id in self.entities(team1).chain(self.entities(team2)) {
            if self.get(id) == 0 && !unseen[..n_unseen].contains(&id) {
                unseen[n_unseen] = id;
                n_unseen += 1;
            }
        }
        (self.total + self.observed as u64 + n_unseen as u64) as f64
    }

    pub(crate) fn record_match(&mut self, team1: &Team, team2: &Team) {
        let per_player = self.granularity == Granularity::Player;
        for team in [team1, team2] {
            if per_player {
                for p in team.roster {
                    self.bump(p.index());
                }
            } else {
                self.bump(team.id.index());
            }
        }
        self.fitted += 1;
    }

    fn bump(&mut self, id: usize) {
        if id >= self.counts.len() {
            self.counts.resize(id + 1, 0);
        }
        if self.counts[id] == 0 {
            self.observed += 1;
        }
        self.counts[id] += 1;
        self.total += 1;
    }

    pub(crate) fn set(&mut self, id: usize, count: u64) {
        if id >= self.counts.len() {
            self.counts.resize(id + 1, 0);
        }
        let old = self.counts[id];
        self.total = self.total - old + count;
        match (old > 0, count > 0) {
            (false, true) => self.observed += 1,
            (true, false) => self.observed -= 1,
            _ => {}
        }
        self.counts[id] = count;
    }

    pub(crate) fn set_fitted(&mut self, fitted: u64) {
        self.fitted = fitted;
    }
}
