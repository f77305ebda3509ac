use serde::{Deserialize, Serialize};

use super::table::RatingTable;
use super::{Emulator, Granularity, ObservationCounts};
use crate::data::{MatchRecord, Outcome, Team};
use crate::error::Result;

/// Win/draw/game tallies of one team.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinRecord {
    pub wins: u64,
    pub draws: u64,
    pub games: u64,
}

impl WinRecord {
    /// Share of games won, draws counting half; ½ before the first game.
    pub fn win_rate(&self) -> f64 {
        if self.games == 0 {
            return 0.5;
        }
        (self.wins as f64 + 0.5 * self.draws as f64) / self.games as f64
    }
}

/// Naive baseline: `E[A|B] = (1 + w(A) - w(B)) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct WinRate {
    records: RatingTable<WinRecord>,
    pub(crate) counts: ObservationCounts,
}

impl WinRate {
    pub fn new() -> Self {
        Self { records: RatingTable::new(WinRecord::default()), counts: ObservationCounts::new(Granularity::Team) }
    }

    pub fn record(&self, team: usize) -> WinRecord {
        self.records.get(team)
    }

    pub(crate) fn set_record(&mut self, team: usize, record: WinRecord) {
        self.records.set(team, record);
    }
}

impl Default for WinRate {
    fn default() -> Self {
        Self::new()
    }
}

impl Emulator for WinRate {
    fn name(&self) -> &'static str {
        "WinRate"
    }

    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        let w1 = self.records.get(team1.id.index()).win_rate();
        let w2 = self.records.get(team2.id.index()).win_rate();
        (1.0 + w1 - w2) / 2.0
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        for (team, outcome) in [(&record.team1, record.outcome), (&record.team2, record.outcome.flipped())] {
            let r = self.records.get_mut(team.id.index());
            r.games += 1;
            match outcome {
                Outcome::Win1 => r.wins += 1,
                Outcome::Draw => r.draws += 1,
                Outcome::Win2 => {}
            }
        }
        self.counts.record_match(&record.team1, &record.team2);
        Ok(())
    }

    fn counts(&self) -> &ObservationCounts {
        &self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emulator::tests::{game, team};

    fn with_rates(w0: WinRecord, w1: WinRecord) -> WinRate {
        let mut e = WinRate::new();
        e.set_record(0, w0);
        e.set_record(1, w1);
        e
    }

    #[test]
    fn formula_points() {
        let rec = |wins, games| WinRecord { wins, draws: 0, games };
        assert_eq!(with_rates(rec(2, 4), rec(1, 2)).predict(&team(0), &team(1)), 0.5);
        assert_eq!(with_rates(rec(3, 3), rec(0, 5)).predict(&team(0), &team(1)), 1.0);
        assert_eq!(with_rates(rec(3, 4), rec(1, 2)).predict(&team(0), &team(1)), 0.625);
    }

    #[test]
    fn unseen_teams_default_to_even() {
        assert_eq!(WinRate::new().predict(&team(4), &team(9)), 0.5);
    }

    #[test]
    fn draws_count_half() {
        let mut e = WinRate::new();
        e.fit(&game(0, 0, 1, Outcome::Draw)).unwrap();
        e.fit(&game(1, 0, 2, Outcome::Win1)).unwrap();
        assert_eq!(e.record(0), WinRecord { wins: 1, draws: 1, games: 2 });
        assert_eq!(e.record(0).win_rate(), 0.75);
        assert_eq!(e.record(2).win_rate(), 0.0);
    }
}
