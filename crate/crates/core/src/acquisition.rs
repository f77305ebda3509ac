//! Acquisition functions: heuristic values of a candidate matchup for a given
//! emulator state. The simulator fits whichever sampled candidate scores
//! highest.
//!
//! Observation counts enter as `ĉ = c + 1` wherever they appear inside a
//! logarithm or a denominator, so unseen teams are well defined and get the
//! highest priority.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::{MatchDataset, MatchRecord, Team};
use crate::emulator::{Emulator, EmulatorSpec};
use crate::error::{Error, Result};
use crate::simulator;
use crate::Rng;

/// Weights of the two terms of the weighted acquisition function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightedParams {
    /// Weight on the draw factor.
    pub alpha: f64,
    /// Weight on the seen factor.
    pub beta_w: f64,
}

impl Default for WeightedParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta_w: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AcquisitionSpec {
    Random,
    MostSeen,
    LeastSeen,
    LikeliestWin,
    LikeliestDraw,
    CrossEntropy,
    Weighted(#[serde(default)] WeightedParams),
    #[serde(rename = "TSQuality")]
    TsQuality,
    Cheat,
}

impl AcquisitionSpec {
    /// The eight table columns, in reporting order. The cheating function is
    /// left out: it needs the remaining pool and is far slower.
    pub fn table_default() -> [AcquisitionSpec; 8] {
        [
            AcquisitionSpec::Random,
            AcquisitionSpec::MostSeen,
            AcquisitionSpec::LeastSeen,
            AcquisitionSpec::LikeliestWin,
            AcquisitionSpec::LikeliestDraw,
            AcquisitionSpec::CrossEntropy,
            AcquisitionSpec::Weighted(WeightedParams::default()),
            AcquisitionSpec::TsQuality,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            AcquisitionSpec::Random => "Random",
            AcquisitionSpec::MostSeen => "MostSeen",
            AcquisitionSpec::LeastSeen => "LeastSeen",
            AcquisitionSpec::LikeliestWin => "LikeliestWin",
            AcquisitionSpec::LikeliestDraw => "LikeliestDraw",
            AcquisitionSpec::CrossEntropy => "CrossEntropy",
            AcquisitionSpec::Weighted(_) => "Weighted",
            AcquisitionSpec::TsQuality => "TSQuality",
            AcquisitionSpec::Cheat => "Cheat",
        }
    }

    /// Fails for pairings that have no meaning, i.e. match quality on a
    /// non-TrueSkill emulator.
    pub fn check_applicable(&self, emulator: &EmulatorSpec) -> Result<()> {
        if *self == AcquisitionSpec::TsQuality && !emulator.is_trueskill() {
            return Err(Error::InapplicablePairing { emulator: emulator.name(), af: self.name() });
        }
        if let AcquisitionSpec::Weighted(p) = self {
            if !(p.alpha.is_finite() && p.beta_w.is_finite()) {
                return Err(Error::InvalidParameter("weighted AF weights must be finite".into()));
            }
        }
        Ok(())
    }
}

/// What a score may depend on besides the emulator and the candidate.
pub struct ScoreContext<'a> {
    pub rng: &'a mut Rng,
    /// Unseen training data, used only by [`AcquisitionSpec::Cheat`].
    pub holdout: Option<&'a MatchDataset>,
}

/// Scores one candidate. Only the cheating function clones and fits; every
/// other variant reads the emulator without touching it.
pub fn score<E: Emulator + Clone>(
    spec: &AcquisitionSpec,
    emulator: &E,
    candidate: &MatchRecord,
    ctx: &mut ScoreContext<'_>,
) -> Result<f64> {
    let (t1, t2) = (&candidate.team1, &candidate.team2);
    Ok(match spec {
        AcquisitionSpec::Random => ctx.rng.random::<f64>(),
        AcquisitionSpec::LeastSeen => least_seen(emulator, t1, t2),
        AcquisitionSpec::MostSeen => -least_seen(emulator, t1, t2),
        AcquisitionSpec::LikeliestDraw => binary_entropy(emulator.predict(t1, t2)),
        AcquisitionSpec::LikeliestWin => -binary_entropy(emulator.predict(t1, t2)),
        AcquisitionSpec::CrossEntropy => cross_entropy(emulator, t1, t2),
        AcquisitionSpec::Weighted(params) => weighted(emulator, t1, t2, params),
        AcquisitionSpec::TsQuality => {
            emulator.quality(t1, t2).ok_or(Error::InapplicablePairing { emulator: emulator.name(), af: spec.name() })?
        }
        AcquisitionSpec::Cheat => cheat(emulator, candidate, ctx.holdout.ok_or(Error::NoDecisiveMatches)?)?,
    })
}

fn smoothed(count: u64) -> f64 {
    count as f64 + 1.0
}

/// `−Σ ln ĉ` over the rated entities of both teams (ten players for a
/// per-player emulator).
pub fn least_seen<E: Emulator + ?Sized>(emulator: &E, team1: &Team, team2: &Team) -> f64 {
    let counts = emulator.counts();
    -counts.entities(team1).chain(counts.entities(team2)).map(|i| smoothed(counts.get(i)).ln()).sum::<f64>()
}

/// Binary entropy in nats, with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Surprisal of the predicted result against the emulator's matchup
/// distribution `p(m) = ĉ₁/Σĉ · ĉ₂/Σĉ`.
pub fn cross_entropy_value(p: f64, c1: f64, c2: f64, total: f64) -> f64 {
    let pm = (c1 / total) * (c2 / total);
    let term = |q: f64| if q > 0.0 { -q * (q * pm).ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

pub fn cross_entropy<E: Emulator + ?Sized>(emulator: &E, team1: &Team, team2: &Team) -> f64 {
    let counts = emulator.counts();
    cross_entropy_value(
        emulator.predict(team1, team2),
        smoothed(counts.team_count(team1)),
        smoothed(counts.team_count(team2)),
        counts.smoothed_total(team1, team2),
    )
}

/// `α·(1 − |2p − 1|) + β_w·Σ (1/ĉ − 1/(ĉ+1))`.
pub fn weighted_value(p: f64, c1: f64, c2: f64, params: &WeightedParams) -> f64 {
    let draw_factor = 1.0 - (p - (1.0 - p)).abs();
    let novelty = |c: f64| 1.0 / c - 1.0 / (c + 1.0);
    params.alpha * draw_factor + params.beta_w * (novelty(c1) + novelty(c2))
}

pub fn weighted<E: Emulator + ?Sized>(emulator: &E, team1: &Team, team2: &Team, params: &WeightedParams) -> f64 {
    let counts = emulator.counts();
    weighted_value(emulator.predict(team1, team2), smoothed(counts.team_count(team1)), smoothed(counts.team_count(team2)), params)
}

/// Negative 0/1 error on `holdout` of a copy of the emulator after it has
/// been fitted on the candidate's actual result.
pub fn cheat<E: Emulator + Clone>(emulator: &E, candidate: &MatchRecord, holdout: &MatchDataset) -> Result<f64> {
    let mut copy = emulator.clone();
    copy.fit(candidate)?;
    let accuracy = simulator::evaluate(&copy, holdout)?;
    Ok(-(1.0 - accuracy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Outcome;
    use crate::emulator::tests::{game, team};
    use crate::emulator::{Elo, EloParams, TrueSkillParams, TrueSkillTeam};
    use alloc::vec;
    use rand::SeedableRng;

    #[test]
    fn entropy_points() {
        assert!((binary_entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.9) - 0.325_082_973_391_448_2).abs() < 1e-12);
        assert_eq!(binary_entropy(0.2), binary_entropy(0.8));
    }

    #[test]
    fn cross_entropy_two_team_example() {
        assert!((cross_entropy_value(0.5, 2.0, 2.0, 4.0) - 2.079_441_541_679_836).abs() < 1e-12);
        assert!(cross_entropy_value(0.5, 3.0, 2.0, 5.0) < cross_entropy_value(0.5, 2.0, 2.0, 5.0));
        assert!(cross_entropy_value(0.5, 2.0, 2.0, 6.0) > cross_entropy_value(0.6, 2.0, 2.0, 6.0));
    }

    #[test]
    fn cross_entropy_through_emulator() {
        let mut e = Elo::new(EloParams::default()).unwrap();
        e.fit(&game(0, 0, 1, Outcome::Draw)).unwrap();
        let ce = cross_entropy(&e, &team(0), &team(1));
        assert!((ce - 2.079_441_541_679_836).abs() < 1e-12);
    }

    #[test]
    fn weighted_points() {
        assert_eq!(weighted_value(0.5, 1.0, 1.0, &WeightedParams::default()), 2.0);
        let zero = WeightedParams { alpha: 0.0, beta_w: 0.0 };
        assert_eq!(weighted_value(0.77, 3.0, 9.0, &zero), 0.0);
        let draw_only = WeightedParams { alpha: 1.0, beta_w: 0.0 };
        assert_eq!(weighted_value(0.5, 4.0, 4.0, &draw_only), 1.0);
    }

    #[test]
    fn least_seen_points() {
        let mut e = Elo::new(EloParams::default()).unwrap();
        assert_eq!(least_seen(&e, &team(0), &team(1)), 0.0);
        e.fit(&game(0, 0, 2, Outcome::Win1)).unwrap();
        for i in 1..4 {
            e.fit(&game(i, 1, 3, Outcome::Win1)).unwrap();
        }
        let ls = least_seen(&e, &team(0), &team(1));
        assert!((ls + (2f64.ln() + 4f64.ln())).abs() < 1e-12);
        let mut rng = Rng::seed_from_u64(0);
        let mut ctx = ScoreContext { rng: &mut rng, holdout: None };
        let cand = game(9, 0, 1, Outcome::Win1);
        let most = score(&AcquisitionSpec::MostSeen, &e, &cand, &mut ctx).unwrap();
        assert_eq!(most, -ls);
    }

    #[test]
    fn quality_needs_trueskill() {
        let elo_spec = EmulatorSpec::Elo(EloParams::default());
        assert!(AcquisitionSpec::TsQuality.check_applicable(&elo_spec).is_err());
        assert!(AcquisitionSpec::TsQuality.check_applicable(&EmulatorSpec::TrueSkill(TrueSkillParams::default())).is_ok());
        let e = Elo::new(EloParams::default()).unwrap();
        let mut rng = Rng::seed_from_u64(0);
        let mut ctx = ScoreContext { rng: &mut rng, holdout: None };
        assert!(score(&AcquisitionSpec::TsQuality, &e, &game(0, 0, 1, Outcome::Win1), &mut ctx).is_err());
        let ts = TrueSkillTeam::new(TrueSkillParams::default()).unwrap();
        let q = score(&AcquisitionSpec::TsQuality, &ts, &game(0, 0, 1, Outcome::Win1), &mut ctx).unwrap();
        assert!((q - 0.447_213_595_499_958).abs() < 1e-12);
    }

    #[test]
    fn cheat_scores_are_non_positive_and_leave_emulator_alone() {
        let e = Elo::new(EloParams::default()).unwrap();
        let holdout = MatchDataset::from_records(vec![game(50, 0, 1, Outcome::Win1)]).unwrap();
        let s = cheat(&e, &game(0, 0, 1, Outcome::Win1), &holdout).unwrap();
        assert_eq!(s, 0.0);
        let s = cheat(&e, &game(0, 0, 1, Outcome::Win2), &holdout).unwrap();
        assert_eq!(s, -1.0);
        assert_eq!(e.fitted(), 0);
        let draws = MatchDataset::from_records(vec![game(51, 0, 1, Outcome::Draw)]).unwrap();
        assert_eq!(cheat(&e, &game(0, 0, 1, Outcome::Win1), &draws), Err(Error::NoDecisiveMatches));
    }
}
