#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::table::RatingTable;
use super::{Emulator, Granularity, ObservationCounts};
use crate::data::{MatchRecord, Team};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EloParams {
    /// K-factor.
    pub k: f64,
    /// Rating given to unseen teams.
    pub mu0: f64,
}

impl Default for EloParams {
    fn default() -> Self {
        Self { k: 32.0, mu0: 1500.0 }
    }
}

impl EloParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) || !self.mu0.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!("elo k must be positive, got {}", self.k)));
        }
        Ok(())
    }
}

/// Expected score of a team rated `ra` against one rated `rb`.
pub fn expected_score(ra: f64, rb: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf((rb - ra) / 400.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Elo {
    params: EloParams,
    ratings: RatingTable<f64>,
    pub(crate) counts: ObservationCounts,
}

impl Elo {
    pub fn new(params: EloParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, ratings: RatingTable::new(params.mu0), counts: ObservationCounts::new(Granularity::Team) })
    }

    pub fn params(&self) -> EloParams {
        self.params
    }

    pub fn rating(&self, team: usize) -> f64 {
        self.ratings.get(team)
    }

    pub(crate) fn set_rating(&mut self, team: usize, rating: f64) {
        self.ratings.set(team, rating);
    }
}

impl Emulator for Elo {
    fn name(&self) -> &'static str {
        "Elo"
    }

    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        expected_score(self.rating(team1.id.index()), self.rating(team2.id.index()))
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        let (a, b) = (record.team1.id.index(), record.team2.id.index());
        let (ra, rb) = (self.rating(a), self.rating(b));
        let delta = self.params.k * (record.outcome.score1() - expected_score(ra, rb));
        self.ratings.set(a, ra + delta);
        self.ratings.set(b, rb - delta);
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
    use crate::data::Outcome;
    use crate::emulator::tests::{game, team};

    #[test]
    fn expected_score_points() {
        assert_eq!(expected_score(1500.0, 1500.0), 0.5);
        assert!((expected_score(1900.0, 1500.0) - 10.0 / 11.0).abs() < 1e-15);
        assert_eq!(expected_score(1600.0, 1300.0) + expected_score(1300.0, 1600.0), 1.0);
    }

    #[test]
    fn equal_ratings_win_moves_sixteen() {
        let mut e = Elo::new(EloParams::default()).unwrap();
        e.fit(&game(0, 0, 1, Outcome::Win1)).unwrap();
        assert_eq!(e.rating(0), 1516.0);
        assert_eq!(e.rating(1), 1484.0);
    }

    #[test]
    fn draw_between_equals_is_a_no_op() {
        let mut e = Elo::new(EloParams::default()).unwrap();
        e.fit(&game(0, 0, 1, Outcome::Draw)).unwrap();
        assert_eq!((e.rating(0), e.rating(1)), (1500.0, 1500.0));
    }

    #[test]
    fn favourite_gains_little() {
        let mut e = Elo::new(EloParams::default()).unwrap();
        e.set_rating(0, 1900.0);
        e.fit(&game(0, 0, 1, Outcome::Win1)).unwrap();
        assert!((e.rating(0) - 1900.0 - 32.0 / 11.0).abs() < 1e-9);
        assert!((e.rating(0) + e.rating(1) - 3400.0).abs() < 1e-9);
        assert!(e.predict(&team(0), &team(1)) > 0.9);
    }

    #[test]
    fn rejects_non_positive_k() {
        assert!(Elo::new(EloParams { k: 0.0, ..Default::default() }).is_err());
    }
}
